#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "shblab/dynamics.hpp"
#include "shblab/parallel.hpp"
#include "shblab/rng.hpp"
#include "shblab/schedule.hpp"

namespace shblab {
namespace {

// Haar-ish orthogonal matrix: QR of a seeded gaussian matrix with the sign
// of R's diagonal folded into Q.
Eigen::MatrixXd random_orthogonal(Eigen::Index d, std::uint64_t basis_seed) {
  GaussianStream gs(basis_seed, 0);
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) = gs.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Eigen::Index i = 0; i < d; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  return q;
}

}  // namespace

RunResult shb_run_dense(const QuadraticProblem& problem,
                        const RunConfig& config, std::uint64_t basis_seed,
                        bool identity_basis) {
  const std::size_t d = problem.dim();
  if (d > 512)
    throw std::invalid_argument(
        "shb_run_dense: dim must be <= 512 (validation device)");
  if (config.T < 2)
    throw std::invalid_argument("shb_run_dense: T must be at least 2");
  if (config.trials < 1)
    throw std::invalid_argument("shb_run_dense: trials must be positive");
  if (!(config.beta >= 0.0 && config.beta < 1.0))
    throw std::invalid_argument("shb_run_dense: beta must lie in [0,1)");
  const StepSchedule sched = make_schedule(config.eta0, config.T);
  const Eigen::Index n = static_cast<Eigen::Index>(d);

  const Eigen::MatrixXd v = identity_basis
                                ? Eigen::MatrixXd::Identity(n, n).eval()
                                : random_orthogonal(n, basis_seed);
  const Eigen::VectorXd lam =
      Eigen::Map<const Eigen::VectorXd>(problem.eigenvalues.data(), n);
  const Eigen::MatrixXd h = v * lam.asDiagonal() * v.transpose();
  const Eigen::VectorXd opt_dense =
      v * Eigen::Map<const Eigen::VectorXd>(problem.optimum.data(), n);

  RunResult res;
  res.step_size_warning = config.eta0 * problem.eigenvalues.front() > 1.0;

  double initial_risk = 0.0;
  for (std::size_t j = 0; j < d; ++j)
    initial_risk +=
        problem.eigenvalues[j] * problem.optimum[j] * problem.optimum[j];
  initial_risk *= 0.5;
  const double threshold = 1e12 * (initial_risk > 0.0 ? initial_risk : 1.0);

  const double sigma = std::sqrt(problem.sigma_sq);
  Eigen::VectorXd noise_scale(n);
  for (Eigen::Index j = 0; j < n; ++j)
    noise_scale(j) = sigma * std::sqrt(problem.eigenvalues[j]);
  const bool noisy = problem.sigma_sq > 0.0;
  const bool trace = config.record == RecordMode::RiskTrace;

  res.trials.resize(static_cast<std::size_t>(config.trials));
  parallel_blocks(config.trials, config.jobs, [&](std::int64_t trial) {
    GaussianStream stream(config.seed, static_cast<std::uint64_t>(trial));
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd zeta(n), g(n), dev(n);

    TrialOutcome out;
    out.final_risk = initial_risk;
    if (trace) {
      out.risk_trace.reserve(static_cast<std::size_t>(config.T) + 1);
      out.risk_trace.push_back(initial_risk);
    }

    std::int64_t t = 0;
    for (int s = 0; s < sched.n_stages && !out.diverged; ++s) {
      const double eta = sched.stage_eta(s);
      const std::int64_t end = sched.stage_end(s);
      for (; t < end; ++t) {
        g.noalias() = h * (w - opt_dense);
        if (noisy) {
          // Replays the eigen-coordinate draws shb_run would consume, then
          // rotates them into the dense basis.
          for (Eigen::Index j = 0; j < n; ++j)
            zeta(j) = noise_scale(j) * stream.normal();
          g.noalias() += v * zeta;
        }
        u = config.beta * u + eta * g;
        w -= u;
        dev = w - opt_dense;
        const double risk = 0.5 * dev.dot(h * dev);
        if (trace) out.risk_trace.push_back(risk);
        out.final_risk = risk;
        if (!(risk < threshold)) {
          out.diverged = true;
          out.divergence_step = t;
          break;
        }
      }
    }
    res.trials[static_cast<std::size_t>(trial)] = std::move(out);
  });

  double sum = 0.0;
  int cnt = 0;
  for (const auto& tr : res.trials) {
    if (tr.diverged)
      ++res.n_diverged;
    else {
      sum += tr.final_risk;
      ++cnt;
    }
  }
  if (cnt > 0) res.mean_risk = sum / cnt;
  if (cnt > 1) {
    double ss = 0.0;
    for (const auto& tr : res.trials)
      if (!tr.diverged) {
        const double dlt = tr.final_risk - res.mean_risk;
        ss += dlt * dlt;
      }
    res.std_risk = std::sqrt(ss / (cnt - 1));
  }
  return res;
}

}  // namespace shblab
