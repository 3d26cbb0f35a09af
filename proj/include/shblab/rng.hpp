#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace shblab {

// Deterministic gaussian stream for simulation trials.
//
// Substreams are mt19937_64 engines seeded from std::seed_seq{seed,
// trial_index}. Normal variates come from the Marsaglia polar transform over
// 53-bit uniforms, so the draw sequence depends only on (seed, trial_index)
// and not on the platform's std::normal_distribution.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t trial_index) {
    std::seed_seq seq{seed, trial_index};
    engine_.seed(seq);
  }

  // U[-1, 1) from the top 53 bits of one engine draw.
  double uniform_pm1() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = uniform_pm1();
      v = uniform_pm1();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace shblab
