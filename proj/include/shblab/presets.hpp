#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shblab/config.hpp"
#include "shblab/sweep.hpp"

namespace shblab {

struct PresetVariant {
  std::string label;
  ProblemSpec problem;
  ParamRule eta0;
  ParamRule beta;
  std::vector<double> reference_slopes;  // expected decay anchors, may be empty
};

// A bundled experiment: fixed problem family, horizon grid, and one or more
// tuning variants to sweep and fit side by side. Desk-scale by design
// (dim <= 5000, horizons up to 2^15).
struct PresetBundle {
  std::string name;
  std::string summary;
  std::vector<std::int64_t> T_grid;
  std::vector<PresetVariant> variants;
  int mc_trials = 5;  // used when run with the sampling engine
};

// Known names: fig3a .. fig3f, linf-exp. Throws std::invalid_argument for
// anything else, listing the valid names.
PresetBundle preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace shblab
