#pragma once

#include <cstdint>
#include <vector>

namespace shblab {

// Stagewise step-size schedule. n = floor(log2 T) stages of nominal length
// K = floor(T / n); the last stage absorbs the remainder (so it is always at
// least K long). Stage s (0-based) runs at eta0 / 4^s; for T = 2^m this puts
// the final step size at 4 * eta0 / T^2.
struct StepSchedule {
  double eta0 = 0.0;
  std::int64_t horizon = 0;    // T
  int n_stages = 0;            // n
  std::int64_t stage_len = 0;  // K

  int stage_of(std::int64_t t) const;          // 0-based, 0 <= t < T
  double stage_eta(int s) const;               // eta0 / 4^s, exact scaling
  double step_size_at(std::int64_t t) const;   // eta_t
  std::int64_t stage_start(int s) const;
  std::int64_t stage_end(int s) const;         // exclusive
  std::vector<double> per_step() const;
};

// Requires T >= 2 and eta0 > 0 (std::invalid_argument otherwise).
StepSchedule make_schedule(double eta0, std::int64_t T);

}  // namespace shblab
