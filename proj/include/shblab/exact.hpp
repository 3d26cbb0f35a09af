#pragma once

#include <cstdint>
#include <vector>

#include "shblab/problem.hpp"
#include "shblab/schedule.hpp"

namespace shblab {

// Exact moment propagation of the momentum iteration: one bias 2-vector and
// one 2x2 noise covariance per eigen-coordinate, advanced step by step. The
// totals are the exact expected excess risk, split into the deterministic
// part (bias) and the noise-driven part (variance); the split is exact
// because the cross term has zero mean.
struct ExactResult {
  std::vector<double> bias_risk;      // per coordinate: 1/2 lambda_j (b_T)_1^2
  std::vector<double> variance_risk;  // per coordinate: 1/2 lambda_j (C_T)_11
  double bias_total = 0.0;
  double variance_total = 0.0;
  double total = 0.0;

  // Covariance health over all steps and coordinates, scaled by entry size;
  // both stay >= -1e-12 for a healthy run.
  double min_cov_diag_scaled = 0.0;
  double min_cov_det_scaled = 0.0;

  std::vector<double> risk_trace;  // risk after steps 1..T when requested
};

struct ExactOptions {
  bool record_trace = false;
  int jobs = 1;
};

// Throws std::runtime_error naming the coordinate and step if an
// intermediate value leaves the finite range.
ExactResult exact_bias_variance(const QuadraticProblem& problem,
                                const StepSchedule& schedule, double beta,
                                const ExactOptions& options = {});

// Second route to the per-coordinate bias: accumulate the full product
// M = A_{T-1} ... A_0 and evaluate 1/2 lambda (M [1;1])_1^2 opt^2. Agrees
// with the recursion route to rounding; kept as an independent cross-check.
std::vector<double> bias_product_route(const QuadraticProblem& problem,
                                       const StepSchedule& schedule,
                                       double beta);

}  // namespace shblab
