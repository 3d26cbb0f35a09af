#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "shblab/dynamics.hpp"
#include "shblab/problem.hpp"
#include "shblab/sweep.hpp"
#include "shblab/tuning.hpp"

namespace shblab {

struct ProblemSpec {
  std::size_t dim = 0;
  SpectrumProfile spectrum;
  OptimumProfile optimum;
  double sigma_sq = 0.0;

  QuadraticProblem build() const;
};

// Horizon-aware auto tuning requested from a config file ("auto" in place of
// numeric beta / eta0).
struct AutoTuning {
  double a = 0.0;
  double b = 0.0;
  TuningMode mode = TuningMode::Practical;
  double c_A = 10.0;
};

struct RunSpec {
  std::optional<double> beta;
  std::optional<double> eta0;
  std::optional<AutoTuning> auto_tuning;
  std::int64_t T = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  RecordMode record = RecordMode::FinalRisk;

  // Applies auto tuning when requested; lambda1 is the top eigenvalue.
  RunConfig resolve(double lambda1) const;
};

struct SweepSpec {
  std::vector<std::int64_t> T_grid;
  ParamRule eta0 = ParamRule::fixed(0.1);
  ParamRule beta = ParamRule::fixed(0.0);
  Engine engine = Engine::Exact;
  int trials = 5;
  double tail_fraction = 0.5;
};

struct FileConfig {
  int schema_version = 1;
  ProblemSpec problem;
  RunSpec run;
  std::optional<SweepSpec> sweep;
};

// Strict single-object JSON schema: schema_version, dim, spectrum, optimum,
// sigma_sq, beta, eta0, T, trials, seed, record, and (for sweeps) T_grid,
// engine, tail_fraction. Unknown keys anywhere are errors
// (std::invalid_argument), as are missing required keys and wrong types.
FileConfig parse_config_json(const std::string& json_text);
FileConfig load_config_file(const std::string& path);

}  // namespace shblab
