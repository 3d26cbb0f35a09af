#include "shblab/schedule.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace shblab {

StepSchedule make_schedule(double eta0, std::int64_t T) {
  if (!(eta0 > 0.0))
    throw std::invalid_argument("schedule: eta0 must be positive");
  if (T < 2) throw std::invalid_argument("schedule: T must be at least 2");
  StepSchedule s;
  s.eta0 = eta0;
  s.horizon = T;
  s.n_stages =
      std::bit_width(static_cast<std::uint64_t>(T)) - 1;  // floor(log2 T)
  s.stage_len = T / s.n_stages;
  return s;
}

int StepSchedule::stage_of(std::int64_t t) const {
  if (t < 0 || t >= horizon)
    throw std::out_of_range("schedule: step index " + std::to_string(t) +
                            " outside [0, " + std::to_string(horizon) + ")");
  const std::int64_t s = t / stage_len;
  return static_cast<int>(std::min<std::int64_t>(s, n_stages - 1));
}

double StepSchedule::stage_eta(int s) const {
  if (s < 0 || s >= n_stages)
    throw std::out_of_range("schedule: stage index out of range");
  return std::ldexp(eta0, -2 * s);  // eta0 / 4^s, exact scaling
}

double StepSchedule::step_size_at(std::int64_t t) const {
  return stage_eta(stage_of(t));
}

std::int64_t StepSchedule::stage_start(int s) const {
  if (s < 0 || s >= n_stages)
    throw std::out_of_range("schedule: stage index out of range");
  return static_cast<std::int64_t>(s) * stage_len;
}

std::int64_t StepSchedule::stage_end(int s) const {
  return (s == n_stages - 1) ? horizon : stage_start(s) + stage_len;
}

std::vector<double> StepSchedule::per_step() const {
  std::vector<double> out(static_cast<std::size_t>(horizon));
  for (int s = 0; s < n_stages; ++s) {
    const double eta = stage_eta(s);
    for (std::int64_t t = stage_start(s); t < stage_end(s); ++t)
      out[static_cast<std::size_t>(t)] = eta;
  }
  return out;
}

}  // namespace shblab
