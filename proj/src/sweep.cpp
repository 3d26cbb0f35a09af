#include "shblab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "shblab/bounds.hpp"
#include "shblab/dynamics.hpp"
#include "shblab/exact.hpp"
#include "shblab/schedule.hpp"

namespace shblab {

double ParamRule::at(std::int64_t T) const {
  const double tr = static_cast<double>(T);
  switch (kind) {
    case Kind::Fixed:
      return value;
    case Kind::PowerOfT:
      return coeff * std::pow(tr, exponent);
    case Kind::OneMinusPowerOfT: {
      // Clamp into [0, 1) so huge coefficients at small T degrade to
      // momentum-free instead of an invalid beta.
      const double v = 1.0 - coeff * std::pow(tr, exponent);
      return std::clamp(v, 0.0, std::nextafter(1.0, 0.0));
    }
  }
  throw std::logic_error("ParamRule::at: bad kind");
}

std::string ParamRule::describe() const {
  char buf[96];
  switch (kind) {
    case Kind::Fixed:
      std::snprintf(buf, sizeof buf, "%g", value);
      break;
    case Kind::PowerOfT:
      std::snprintf(buf, sizeof buf, "%g*T^(%g)", coeff, exponent);
      break;
    case Kind::OneMinusPowerOfT:
      std::snprintf(buf, sizeof buf, "1-%g*T^(%g)", coeff, exponent);
      break;
  }
  return buf;
}

ParamRule ParamRule::fixed(double v) {
  ParamRule r;
  r.kind = Kind::Fixed;
  r.value = v;
  return r;
}

ParamRule ParamRule::power(double coeff, double exponent) {
  ParamRule r;
  r.kind = Kind::PowerOfT;
  r.coeff = coeff;
  r.exponent = exponent;
  return r;
}

ParamRule ParamRule::one_minus_power(double coeff, double exponent) {
  ParamRule r;
  r.kind = Kind::OneMinusPowerOfT;
  r.coeff = coeff;
  r.exponent = exponent;
  return r;
}

SweepResult run_sweep(const QuadraticProblem& problem,
                      const SweepConfig& config) {
  if (config.T_grid.empty())
    throw std::invalid_argument("run_sweep: empty horizon grid");
  for (std::int64_t t : config.T_grid)
    if (t < 2) throw std::invalid_argument("run_sweep: horizons must be >= 2");
  if (config.engine == Engine::MonteCarlo && config.trials < 1)
    throw std::invalid_argument("run_sweep: need at least one trial");

  SweepResult result;
  result.points.reserve(config.T_grid.size());
  for (std::size_t i = 0; i < config.T_grid.size(); ++i) {
    const std::int64_t T = config.T_grid[i];
    SweepPoint pt;
    pt.T = T;
    pt.eta0 = config.eta0.at(T);
    pt.beta = config.beta.at(T);
    if (!(pt.eta0 > 0.0)) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "run_sweep: eta0 rule %s gives %g at T=%lld",
                    config.eta0.describe().c_str(), pt.eta0,
                    static_cast<long long>(T));
      throw std::invalid_argument(buf);
    }

    const BoundReport rep =
        risk_bounds(problem, pt.eta0, pt.beta, static_cast<double>(T));
    pt.upper_bound = rep.upper_total;
    pt.lower_bound = rep.lower_bound;
    pt.k_star = rep.k_star;

    if (config.engine == Engine::Exact) {
      const StepSchedule sched = make_schedule(pt.eta0, T);
      const ExactResult ex = exact_bias_variance(problem, sched, pt.beta,
                                                 {.record_trace = false,
                                                  .jobs = config.jobs});
      pt.bias = ex.bias_total;
      pt.variance = ex.variance_total;
      pt.mean_risk = ex.total;
      pt.std_risk = 0.0;
      pt.n_trials = 1;
      pt.trial_rows.push_back({ex.total, false});
      pt.usable = std::isfinite(ex.total);
    } else {
      RunConfig rc;
      rc.beta = pt.beta;
      rc.eta0 = pt.eta0;
      rc.T = T;
      rc.trials = config.trials;
      rc.seed = config.seed + 1000003ULL * static_cast<std::uint64_t>(i);
      rc.jobs = config.jobs;
      const RunResult rr = shb_run(problem, rc);
      pt.mean_risk = rr.mean_risk;
      pt.std_risk = rr.std_risk;
      pt.n_trials = config.trials;
      pt.n_diverged = rr.n_diverged;
      for (const TrialOutcome& tr : rr.trials)
        pt.trial_rows.push_back({tr.final_risk, tr.diverged});
      pt.usable =
          rr.n_diverged < config.trials && std::isfinite(rr.mean_risk);
      if (rr.n_diverged == config.trials) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "all %d trials diverged at T=%lld (eta0=%g, beta=%g)",
                      config.trials, static_cast<long long>(T), pt.eta0,
                      pt.beta);
        result.warnings.emplace_back(buf);
      }
    }
    result.points.push_back(std::move(pt));
  }
  return result;
}

RateFit fit_rate(const SweepResult& sweep, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw std::invalid_argument("fit_rate: tail_fraction must lie in (0, 1]");

  // Usable points with positive risk, sorted by horizon.
  std::vector<std::pair<double, double>> pts;  // (ln T, ln risk)
  std::vector<std::int64_t> horizons;
  for (const SweepPoint& p : sweep.points)
    if (p.usable && p.mean_risk > 0.0) horizons.push_back(p.T);
  std::sort(horizons.begin(), horizons.end());
  if (horizons.size() < 3)
    throw std::runtime_error("fit_rate: need at least 3 usable points");

  const std::size_t n_use = std::max<std::size_t>(
      3, static_cast<std::size_t>(
             std::ceil(tail_fraction * static_cast<double>(horizons.size()))));
  const std::int64_t cutoff = horizons[horizons.size() - n_use];
  for (const SweepPoint& p : sweep.points)
    if (p.usable && p.mean_risk > 0.0 && p.T >= cutoff)
      pts.emplace_back(std::log(static_cast<double>(p.T)),
                       std::log(p.mean_risk));

  const double n = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0))
    throw std::runtime_error("fit_rate: degenerate horizon grid");

  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (auto [x, y] : pts) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.points_used = pts.size();
  return fit;
}

}  // namespace shblab
