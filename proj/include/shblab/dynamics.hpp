#pragma once

#include <cstdint>
#include <vector>

#include "shblab/problem.hpp"

namespace shblab {

enum class RecordMode { FinalRisk, RiskTrace };

struct RunConfig {
  double beta = 0.0;
  double eta0 = 0.1;
  std::int64_t T = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  RecordMode record = RecordMode::FinalRisk;
  int jobs = 1;
};

struct TrialOutcome {
  double final_risk = 0.0;
  bool diverged = false;
  std::int64_t divergence_step = -1;       // first step past the threshold
  std::vector<double> risk_trace;          // RiskTrace: risk(w_0) .. risk(w_T)
};

struct RunResult {
  std::vector<TrialOutcome> trials;
  double mean_risk = 0.0;  // over non-diverged trials
  double std_risk = 0.0;   // sample std (n-1 denominator), 0 when n < 2
  int n_diverged = 0;
  bool step_size_warning = false;  // eta0 * lambda_1 > 1
};

// Momentum iteration from w = u = 0:
//   u <- beta * u + eta_t * g(w),   w <- w - u,
// one seeded RNG substream per trial (see rng.hpp). beta = 0 is plain SGD.
// A trial is marked diverged, and excluded from the mean, once its risk
// exceeds 1e12 x the starting risk (floor 1.0 if the start is already at the
// optimum) or stops being finite.
RunResult shb_run(const QuadraticProblem& problem, const RunConfig& config);

// Same trajectory law in a rotated basis: materializes the Hessian as
// V diag(lambda) V^T for a seeded random orthogonal V and injects noise whose
// eigen-coordinates replay the exact stream shb_run would draw. Risks agree
// with shb_run to rounding. identity_basis = true pins V = I, which makes the
// two modes agree to reassociation error. Validation device; dim <= 512.
RunResult shb_run_dense(const QuadraticProblem& problem, const RunConfig& config,
                        std::uint64_t basis_seed, bool identity_basis = false);

}  // namespace shblab
