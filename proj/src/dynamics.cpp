#include "shblab/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shblab/parallel.hpp"
#include "shblab/rng.hpp"
#include "shblab/schedule.hpp"

namespace shblab {
namespace {

TrialOutcome run_trial(const QuadraticProblem& pr, const RunConfig& cfg,
                       const StepSchedule& sched,
                       const std::vector<double>& noise_scale,
                       std::uint64_t trial_index, double initial_risk,
                       double threshold) {
  const std::size_t d = pr.dim();
  GaussianStream stream(cfg.seed, trial_index);
  std::vector<double> w(d, 0.0), u(d, 0.0);
  const bool noisy = pr.sigma_sq > 0.0;
  const bool trace = cfg.record == RecordMode::RiskTrace;

  TrialOutcome out;
  out.final_risk = initial_risk;
  if (trace) {
    out.risk_trace.reserve(static_cast<std::size_t>(cfg.T) + 1);
    out.risk_trace.push_back(initial_risk);
  }

  std::int64_t t = 0;
  for (int s = 0; s < sched.n_stages; ++s) {
    const double eta = sched.stage_eta(s);
    const std::int64_t end = sched.stage_end(s);
    for (; t < end; ++t) {
      double risk_acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double g = pr.eigenvalues[j] * (w[j] - pr.optimum[j]);
        if (noisy) g += noise_scale[j] * stream.normal();
        const double nu = cfg.beta * u[j] + eta * g;
        u[j] = nu;
        w[j] -= nu;
        const double dev = w[j] - pr.optimum[j];
        risk_acc += pr.eigenvalues[j] * dev * dev;
      }
      const double risk = 0.5 * risk_acc;
      if (trace) out.risk_trace.push_back(risk);
      out.final_risk = risk;
      if (!(risk < threshold)) {  // also catches NaN
        out.diverged = true;
        out.divergence_step = t;
        return out;
      }
    }
  }
  return out;
}

}  // namespace

RunResult shb_run(const QuadraticProblem& problem, const RunConfig& config) {
  if (config.T < 2) throw std::invalid_argument("shb_run: T must be at least 2");
  if (config.trials < 1)
    throw std::invalid_argument("shb_run: trials must be positive");
  if (!(config.beta >= 0.0 && config.beta < 1.0))
    throw std::invalid_argument("shb_run: beta must lie in [0,1)");
  const StepSchedule sched = make_schedule(config.eta0, config.T);

  RunResult res;
  res.step_size_warning = config.eta0 * problem.eigenvalues.front() > 1.0;

  double initial_risk = 0.0;
  for (std::size_t j = 0; j < problem.dim(); ++j)
    initial_risk +=
        problem.eigenvalues[j] * problem.optimum[j] * problem.optimum[j];
  initial_risk *= 0.5;
  const double threshold = 1e12 * (initial_risk > 0.0 ? initial_risk : 1.0);

  const double sigma = std::sqrt(problem.sigma_sq);
  std::vector<double> noise_scale(problem.dim());
  for (std::size_t j = 0; j < problem.dim(); ++j)
    noise_scale[j] = sigma * std::sqrt(problem.eigenvalues[j]);

  res.trials.resize(static_cast<std::size_t>(config.trials));
  parallel_blocks(config.trials, config.jobs, [&](std::int64_t i) {
    res.trials[static_cast<std::size_t>(i)] =
        run_trial(problem, config, sched, noise_scale,
                  static_cast<std::uint64_t>(i), initial_risk, threshold);
  });

  double sum = 0.0;
  int n = 0;
  for (const auto& tr : res.trials) {
    if (tr.diverged)
      ++res.n_diverged;
    else {
      sum += tr.final_risk;
      ++n;
    }
  }
  res.mean_risk =
      n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
  if (n > 1) {
    double ss = 0.0;
    for (const auto& tr : res.trials)
      if (!tr.diverged) {
        const double dlt = tr.final_risk - res.mean_risk;
        ss += dlt * dlt;
      }
    res.std_risk = std::sqrt(ss / (n - 1));
  }
  return res;
}

}  // namespace shblab
