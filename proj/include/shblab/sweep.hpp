#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shblab/problem.hpp"

namespace shblab {

// eta0 or beta as a function of the horizon, for sweeps whose tuning scales
// with T.
struct ParamRule {
  enum class Kind { Fixed, PowerOfT, OneMinusPowerOfT };
  Kind kind = Kind::Fixed;
  double value = 0.0;     // Fixed
  double coeff = 1.0;     // coeff * T^exponent, or 1 - coeff * T^exponent
  double exponent = 0.0;

  double at(std::int64_t T) const;
  std::string describe() const;

  static ParamRule fixed(double v);
  static ParamRule power(double coeff, double exponent);
  static ParamRule one_minus_power(double coeff, double exponent);
};

enum class Engine { Exact, MonteCarlo };

struct TrialRow {
  double risk = 0.0;
  bool diverged = false;
};

struct SweepPoint {
  std::int64_t T = 0;
  double eta0 = 0.0;
  double beta = 0.0;
  double mean_risk = 0.0;
  double std_risk = 0.0;  // 0 for the exact engine
  int n_trials = 0;       // 1 for the exact engine
  int n_diverged = 0;
  double bias = 0.0;      // exact engine; NaN under sampling
  double variance = 0.0;  // exact engine; NaN under sampling
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  std::int64_t k_star = 0;
  bool usable = true;     // false once every trial diverged
  std::vector<TrialRow> trial_rows;  // per-trial detail (sampling engine)
};

struct SweepConfig {
  std::vector<std::int64_t> T_grid;
  ParamRule eta0 = ParamRule::fixed(0.1);
  ParamRule beta = ParamRule::fixed(0.0);
  Engine engine = Engine::Exact;
  int trials = 5;          // sampling engine only
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<std::string> warnings;  // e.g. grid points dropped as diverged
};

// Risk versus horizon over the grid; the problem instance is fixed while
// eta0(T), beta(T) follow their rules. Bound columns ride along per point.
SweepResult run_sweep(const QuadraticProblem& problem, const SweepConfig& config);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural log of the prefactor
  double residual_rms = 0.0;
  int points_used = 0;
};

// OLS of log(mean risk) on log(T) over the largest-T tail_fraction of usable
// points (at least 3; std::runtime_error otherwise). The convention is
// risk ~ exp(intercept) * T^slope, so decaying risk gives a negative slope.
RateFit fit_rate(const SweepResult& sweep, double tail_fraction = 0.5);

}  // namespace shblab
