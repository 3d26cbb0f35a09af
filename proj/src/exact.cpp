#include "shblab/exact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "shblab/momentum.hpp"
#include "shblab/parallel.hpp"

namespace shblab {
namespace {

constexpr double kHuge = 1e300;
constexpr std::int64_t kBlock = 256;  // coordinates per reduction block

struct CoordOut {
  double bias_risk = 0.0;
  double var_risk = 0.0;
  double min_diag = 0.0;
  double min_det = 0.0;
};

// Advances one coordinate through the full schedule. trace_acc, when given,
// receives 1/2 lambda ((b_t)_1^2 + (C_t)_11) per step.
CoordOut run_coordinate(double lambda, double opt, double sigma_sq, double beta,
                        const StepSchedule& sched, std::size_t coord,
                        double* trace_acc) {
  // The bias pair runs in extended precision: the product route recomputes
  // the same quantity from stage powers, and near an oscillation zero of
  // (b_T)_1 double rounding alone would not keep the two routes within the
  // 1e-10 contract. Both routes consume the identical double-rounded matrix
  // entries, so they approximate the same map.
  long double b0 = -opt, b1 = -opt;        // bias 2-vector (current, previous)
  const long double bl = beta;
  double c00 = 0.0, c01 = 0.0, c11 = 0.0;  // symmetric covariance
  double min_diag = 0.0, min_det = 0.0;
  std::int64_t t = 0;
  for (int s = 0; s < sched.n_stages; ++s) {
    const double eta = sched.stage_eta(s);
    const double el = eta * lambda;
    const double p = 1.0 + beta - el;
    const long double pl = p;
    const double q = eta * eta * sigma_sq * lambda;  // injected noise energy
    const std::int64_t end = sched.stage_end(s);
    for (; t < end; ++t) {
      const long double nb0 = pl * b0 - bl * b1;
      b1 = b0;
      b0 = nb0;
      // C <- A C A^T + q e11 for A = [[p, -beta], [1, 0]]
      const double n00 =
          p * p * c00 - 2.0 * p * beta * c01 + beta * beta * c11 + q;
      const double n01 = p * c00 - beta * c01;
      c11 = c00;
      c01 = n01;
      c00 = n00;
      if (!(std::abs(b0) < kHuge && std::abs(c00) < kHuge))
        throw std::runtime_error(
            "exact engine: non-finite value at coordinate " +
            std::to_string(coord + 1) + ", step " + std::to_string(t));
      const double scale =
          std::max({1.0, std::abs(c00), std::abs(c01), std::abs(c11)});
      min_diag = std::min(min_diag, std::min(c00, c11) / scale);
      min_det = std::min(min_det, (c00 * c11 - c01 * c01) / (scale * scale));
      if (trace_acc)
        trace_acc[t] += 0.5 * lambda * (static_cast<double>(b0 * b0) + c00);
    }
  }
  CoordOut out;
  out.bias_risk = static_cast<double>(0.5L * lambda * b0 * b0);
  out.var_risk = 0.5 * lambda * c00;
  out.min_diag = min_diag;
  out.min_det = min_det;
  return out;
}

}  // namespace

ExactResult exact_bias_variance(const QuadraticProblem& problem,
                                const StepSchedule& schedule, double beta,
                                const ExactOptions& options) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("exact engine: beta must lie in [0,1)");
  const std::size_t d = problem.dim();
  const std::size_t t_len = static_cast<std::size_t>(schedule.horizon);

  ExactResult res;
  res.bias_risk.assign(d, 0.0);
  res.variance_risk.assign(d, 0.0);

  const std::int64_t n_blocks =
      (static_cast<std::int64_t>(d) + kBlock - 1) / kBlock;
  std::vector<double> block_min_diag(static_cast<std::size_t>(n_blocks), 0.0);
  std::vector<double> block_min_det(static_cast<std::size_t>(n_blocks), 0.0);
  // Per-block trace buffers keep the reduction order fixed regardless of
  // thread count.
  std::vector<std::vector<double>> block_traces;
  if (options.record_trace)
    block_traces.assign(static_cast<std::size_t>(n_blocks),
                        std::vector<double>(t_len, 0.0));

  parallel_blocks(n_blocks, options.jobs, [&](std::int64_t blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(d, lo + kBlock);
    double* trace = options.record_trace
                        ? block_traces[static_cast<std::size_t>(blk)].data()
                        : nullptr;
    double mdiag = 0.0, mdet = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const CoordOut out =
          run_coordinate(problem.eigenvalues[j], problem.optimum[j],
                         problem.sigma_sq, beta, schedule, j, trace);
      res.bias_risk[j] = out.bias_risk;
      res.variance_risk[j] = out.var_risk;
      mdiag = std::min(mdiag, out.min_diag);
      mdet = std::min(mdet, out.min_det);
    }
    block_min_diag[static_cast<std::size_t>(blk)] = mdiag;
    block_min_det[static_cast<std::size_t>(blk)] = mdet;
  });

  for (std::size_t j = 0; j < d; ++j) {
    res.bias_total += res.bias_risk[j];
    res.variance_total += res.variance_risk[j];
  }
  res.total = res.bias_total + res.variance_total;
  for (std::int64_t blk = 0; blk < n_blocks; ++blk) {
    res.min_cov_diag_scaled = std::min(
        res.min_cov_diag_scaled, block_min_diag[static_cast<std::size_t>(blk)]);
    res.min_cov_det_scaled = std::min(
        res.min_cov_det_scaled, block_min_det[static_cast<std::size_t>(blk)]);
  }
  if (options.record_trace) {
    res.risk_trace.assign(t_len, 0.0);
    for (std::int64_t blk = 0; blk < n_blocks; ++blk)
      for (std::size_t t = 0; t < t_len; ++t)
        res.risk_trace[t] += block_traces[static_cast<std::size_t>(blk)][t];
  }
  return res;
}

namespace {

struct LMat {
  long double m00, m01, m10, m11;
};

LMat lmat_mul(const LMat& x, const LMat& y) {
  return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
          x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
}

LMat lmat_power(LMat base, std::uint64_t k) {
  LMat acc{1.0L, 0.0L, 0.0L, 1.0L};
  while (k > 0) {
    if (k & 1) acc = lmat_mul(acc, base);
    base = lmat_mul(base, base);
    k >>= 1;
  }
  return acc;
}

}  // namespace

std::vector<double> bias_product_route(const QuadraticProblem& problem,
                                       const StepSchedule& schedule,
                                       double beta) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("exact engine: beta must lie in [0,1)");
  std::vector<double> out(problem.dim());
  for (std::size_t j = 0; j < problem.dim(); ++j) {
    const double lambda = problem.eigenvalues[j];
    // Stage matrices are rounded to double exactly as the forward engine
    // rounds them; only the accumulation carries extra precision.
    LMat m{1.0L, 0.0L, 0.0L, 1.0L};
    for (int s = 0; s < schedule.n_stages; ++s) {
      const Mat2 a = momentum_matrix(beta, schedule.stage_eta(s) * lambda);
      const std::uint64_t len = static_cast<std::uint64_t>(
          schedule.stage_end(s) - schedule.stage_start(s));
      m = lmat_mul(lmat_power({a.m00, a.m01, a.m10, a.m11}, len), m);
    }
    const long double first = m.m00 + m.m01;  // (M [1;1])_1
    const long double opt = problem.optimum[j];
    out[j] = static_cast<double>(0.5L * lambda * first * first * opt * opt);
  }
  return out;
}

}  // namespace shblab
