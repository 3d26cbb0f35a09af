#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shblab/problem.hpp"

namespace shblab {

// Number of coordinates the schedule actually drives: the largest k with
// lambda_k * eta0 >= (1 - sqrt(beta)) / T (ties count), 0 if none qualify.
// Eigenvalues must be descending.
std::int64_t effective_dimension(std::span<const double> eigenvalues,
                                 double eta0, double beta, double T);

struct BoundValidity {
  bool horizon_ok = false;   // T >= 16
  bool step_ok = false;      // eta0 <= 1 / lambda_1
  bool momentum_ok = false;  // beta <= max(0, 1 - A/T)^2
  bool all() const { return horizon_ok && step_ok && momentum_ok; }
};

struct BoundReport {
  std::int64_t k_star = 0;
  double a_constant = 0.0;  // A = 256 * log2(T) * ln(T)
  double bias_bound = 0.0;
  double variance_bound = 0.0;
  double upper_total = 0.0;  // bias_bound + variance_bound
  double lower_bound = 0.0;  // minimax floor with wbar = |optimum|
  BoundValidity validity;
};

// Finite-horizon ceiling on the expected excess risk of the staged momentum
// iteration, split head/tail at k_star, plus the matching minimax floor.
// Values are always computed; when a validity flag is false they are
// reported uncertified rather than suppressed.
BoundReport risk_bounds(const QuadraticProblem& problem, double eta0,
                        double beta, double T);

struct HardInstance {
  std::vector<double> coords;  // worst-case optimum inside the box
  std::vector<bool> in_set;    // high-signal membership
  std::int64_t set_size = 0;
};

// Worst case over optima with |w_i| <= wbar_i: coordinates whose signal
// lambda_k wbar_k^2 reaches sigma_sq / T move to sigma / sqrt(T lambda_k),
// the rest stay at wbar_k. With sigma_sq = 0 every coordinate joins the set.
HardInstance hard_instance_coords(std::span<const double> eigenvalues,
                                  std::span<const double> wbar,
                                  double sigma_sq, double T);

// (1/8) * (|I| sigma_sq / T + sum_{i not in I} lambda_i wbar_i^2), equal to
// (1/8) * sum_k lambda_k coords_k^2 for the hard instance above.
double minimax_lower_bound(std::span<const double> eigenvalues,
                           std::span<const double> wbar, double sigma_sq,
                           double T);

struct LinfBounds {
  double upper = 0.0;
  double lower = 0.0;
  std::int64_t k_star = 0;    // largest k with lambda_k >= 1/T
  std::int64_t k_star_1 = 0;  // largest k with lambda_k >= sigma_sq/(T c^2)
};

// Ceiling/floor pair for a constant-box optimum at level c under plain SGD.
// The two sides use different head cutoffs and carry no ordering guarantee
// against each other. Requires c > 0 and eta0 <= 1/lambda_1.
LinfBounds linf_bounds(std::span<const double> eigenvalues, double c,
                       double sigma_sq, double T, double eta0);

enum class RateRegime { SgdOptimal, ShbOptimal, NoKnownOptimal };

struct RateExponent {
  double exponent = 0.0;  // risk ~ T^exponent
  RateRegime regime = RateRegime::SgdOptimal;
};

// Best attainable power-law exponent -1 + 1/b for spectrum decay a and
// signal decay b, with the regime that attains it. Requires a > 1, b > 1.
RateExponent optimal_rate_exponent(double a, double b);

}  // namespace shblab
