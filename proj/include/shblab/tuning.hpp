#pragma once

#include <cstdint>

#include "shblab/bounds.hpp"

namespace shblab {

enum class TuningMode { Strict, Practical };

struct TuningChoice {
  double beta = 0.0;
  double eta0 = 0.0;
  RateRegime regime = RateRegime::SgdOptimal;
  double a_constant = 0.0;  // multiplier actually used in the momentum formula
};

// Horizon-aware (beta, eta0) choice from the decay pair (a, b):
//   a <= b:       beta = 0,                          eta0 = T^(a/b-1) / (2 lambda1)
//   b < a <= 2b:  beta = (1 - A' T^(-(a-b)/b))^2,    eta0 = 1 / (2 lambda1)
//   a > 2b:       NoKnownOptimal; returns the conservative (0, 1/(2 lambda1))
// Strict mode takes A' = 256 log2(T) ln(T) and throws std::domain_error when
// A' T^(-(a-b)/b) > 1, naming the smallest horizon at which it fits.
// Practical mode takes A' = c_A. Requires a > 1 and b > 1.
TuningChoice select_parameters(double a, double b, double lambda1,
                               std::int64_t T,
                               TuningMode mode = TuningMode::Practical,
                               double c_A = 10.0);

}  // namespace shblab
