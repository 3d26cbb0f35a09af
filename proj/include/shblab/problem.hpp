#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "shblab/rng.hpp"

namespace shblab {

// Quadratic objective in its eigenbasis,
//   f(w) = 1/2 sum_j lambda_j (w_j - opt_j)^2,
// with stochastic gradients whose noise has per-coordinate variance
// sigma_sq * lambda_j. All dynamics in this codebase are coordinate-wise in
// this basis; see dynamics.hpp for the dense-basis validation device.
struct QuadraticProblem {
  std::vector<double> eigenvalues;  // positive, descending
  std::vector<double> optimum;
  double sigma_sq = 0.0;

  std::size_t dim() const { return eigenvalues.size(); }
};

struct SpectrumProfile {
  enum class Kind { PowerLaw, LogAdjusted, Exponential, Explicit };
  Kind kind = Kind::PowerLaw;
  double a = 2.0;              // power_law: lambda_i = c * i^-a
  double c = 1.0;              // power_law scale; log_adjusted log exponent
  std::vector<double> values;  // Explicit only
};

struct OptimumProfile {
  enum class Kind { SourceCondition, LinfConstant, Explicit };
  Kind kind = Kind::SourceCondition;
  double b = 2.0;              // source_condition: lambda_i opt_i^2 = i^-b
  double c = 1.0;              // linf_constant level
  std::vector<double> values;  // Explicit only
};

// Generated spectra must come out positive and non-increasing; anything else
// throws std::invalid_argument (explicit lists are validated the same way).
// power_law with a <= 1 is accepted here: summability matters to the bound
// evaluators, not to construction.
std::vector<double> build_spectrum(const SpectrumProfile& profile, std::size_t dim);

// Optimum in the eigenbasis. source_condition takes the positive root
// opt_i = sqrt(i^-b / lambda_i), so lambda_i opt_i^2 = i^-b exactly.
std::vector<double> build_optimum(const OptimumProfile& profile,
                                  std::span<const double> eigenvalues);

QuadraticProblem make_problem(const SpectrumProfile& spectrum,
                              const OptimumProfile& optimum, std::size_t dim,
                              double sigma_sq);

// 1/2 sum_j lambda_j (w_j - opt_j)^2
double excess_risk(const QuadraticProblem& problem, std::span<const double> w);

// One stochastic gradient in the eigenbasis:
//   g_j = lambda_j (w_j - opt_j) + zeta_j,   zeta_j ~ N(0, sigma_sq * lambda_j),
// independent across coordinates. Consumes dim() normals from `stream` in
// coordinate order (none when sigma_sq == 0).
void sample_gradient(const QuadraticProblem& problem, std::span<const double> w,
                     GaussianStream& stream, std::span<double> g_out);

}  // namespace shblab
