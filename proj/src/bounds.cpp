#include "shblab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shblab {

std::int64_t effective_dimension(std::span<const double> eigenvalues,
                                 double eta0, double beta, double T) {
  if (!(eta0 > 0.0)) throw std::invalid_argument("effective_dimension: eta0 must be positive");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("effective_dimension: beta must lie in [0, 1)");
  if (!(T > 0.0)) throw std::invalid_argument("effective_dimension: T must be positive");
  const double cut = (1.0 - std::sqrt(beta)) / T;
  std::int64_t k = 0;
  // Eigenvalues are non-increasing, so the first miss ends the prefix.
  for (double lam : eigenvalues) {
    if (lam * eta0 >= cut)
      ++k;
    else
      break;
  }
  return k;
}

BoundReport risk_bounds(const QuadraticProblem& problem, double eta0,
                        double beta, double T) {
  if (problem.dim() == 0) throw std::invalid_argument("risk_bounds: empty problem");
  if (!(eta0 > 0.0)) throw std::invalid_argument("risk_bounds: eta0 must be positive");
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("risk_bounds: beta must lie in [0, 1)");
  if (!(T >= 2.0)) throw std::invalid_argument("risk_bounds: T must be at least 2");

  const double lambda1 = problem.eigenvalues.front();
  const double log2t = std::log2(T);
  const double a_const = 256.0 * log2t * std::log(T);
  const double root_beta = std::sqrt(beta);

  BoundReport rep;
  rep.a_constant = a_const;
  rep.k_star = effective_dimension(problem.eigenvalues, eta0, beta, T);

  const double head_coeff =
      std::pow(2.0, 10.0) * log2t * log2t * a_const * (1.0 - root_beta) / (eta0 * T);
  const double tail_coeff = std::pow(2.0, 10.0) * log2t * log2t;
  const std::size_t head = static_cast<std::size_t>(rep.k_star);
  double bias = 0.0;
  for (std::size_t j = 0; j < problem.dim(); ++j) {
    const double w2 = problem.optimum[j] * problem.optimum[j];
    bias += (j < head) ? head_coeff * w2 : tail_coeff * problem.eigenvalues[j] * w2;
  }
  rep.bias_bound = bias;

  double tail_sq = 0.0;
  for (std::size_t j = head; j < problem.dim(); ++j)
    tail_sq += problem.eigenvalues[j] * problem.eigenvalues[j];
  const double head_var =
      (729.0 * lambda1 * lambda1 * eta0 * eta0 + 256.0 * a_const * a_const) *
      static_cast<double>(rep.k_star) / T;
  const double tail_var = 64.0 * eta0 * eta0 * tail_sq * T /
                          ((1.0 - root_beta) * (1.0 - root_beta));
  rep.variance_bound = problem.sigma_sq * (head_var + tail_var);
  rep.upper_total = rep.bias_bound + rep.variance_bound;

  std::vector<double> wbar(problem.dim());
  for (std::size_t j = 0; j < problem.dim(); ++j)
    wbar[j] = std::abs(problem.optimum[j]);
  rep.lower_bound =
      minimax_lower_bound(problem.eigenvalues, wbar, problem.sigma_sq, T);

  rep.validity.horizon_ok = T >= 16.0;
  rep.validity.step_ok = eta0 <= 1.0 / lambda1;
  const double slack = std::max(0.0, 1.0 - a_const / T);
  rep.validity.momentum_ok = beta <= slack * slack;
  return rep;
}

HardInstance hard_instance_coords(std::span<const double> eigenvalues,
                                  std::span<const double> wbar,
                                  double sigma_sq, double T) {
  if (eigenvalues.size() != wbar.size())
    throw std::invalid_argument("hard_instance_coords: size mismatch");
  if (!(sigma_sq >= 0.0))
    throw std::invalid_argument("hard_instance_coords: sigma_sq must be nonnegative");
  if (!(T > 0.0)) throw std::invalid_argument("hard_instance_coords: T must be positive");
  HardInstance inst;
  inst.coords.resize(eigenvalues.size());
  inst.in_set.resize(eigenvalues.size());
  const double floor = sigma_sq / T;
  for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
    const bool in = eigenvalues[k] * wbar[k] * wbar[k] >= floor;
    inst.in_set[k] = in;
    inst.coords[k] =
        in ? std::sqrt(sigma_sq / (T * eigenvalues[k])) : wbar[k];
    if (in) ++inst.set_size;
  }
  return inst;
}

double minimax_lower_bound(std::span<const double> eigenvalues,
                           std::span<const double> wbar, double sigma_sq,
                           double T) {
  const HardInstance inst =
      hard_instance_coords(eigenvalues, wbar, sigma_sq, T);
  double total = static_cast<double>(inst.set_size) * sigma_sq / T;
  for (std::size_t k = 0; k < eigenvalues.size(); ++k)
    if (!inst.in_set[k]) total += eigenvalues[k] * wbar[k] * wbar[k];
  return 0.125 * total;
}

LinfBounds linf_bounds(std::span<const double> eigenvalues, double c,
                       double sigma_sq, double T, double eta0) {
  if (eigenvalues.empty()) throw std::invalid_argument("linf_bounds: empty spectrum");
  if (!(c > 0.0)) throw std::invalid_argument("linf_bounds: radius c must be positive");
  if (!(sigma_sq >= 0.0))
    throw std::invalid_argument("linf_bounds: sigma_sq must be nonnegative");
  if (!(T >= 2.0)) throw std::invalid_argument("linf_bounds: T must be at least 2");
  const double lambda1 = eigenvalues.front();
  if (eta0 > 1.0 / lambda1)
    throw std::invalid_argument("linf_bounds: eta0 exceeds 1/lambda_1");

  LinfBounds out;
  for (double lam : eigenvalues) {
    if (lam >= 1.0 / T)
      ++out.k_star;
    else
      break;
  }
  const double cut1 = sigma_sq / (T * c * c);
  for (double lam : eigenvalues) {
    if (lam >= cut1)
      ++out.k_star_1;
    else
      break;
  }

  const double log2t = std::log2(T);
  double tail_u = 0.0;
  for (std::size_t j = static_cast<std::size_t>(out.k_star);
       j < eigenvalues.size(); ++j)
    tail_u += eigenvalues[j];
  out.upper = (1.0 + sigma_sq) *
              (static_cast<double>(out.k_star) * std::pow(log2t, 4.0) / T +
               log2t * log2t * tail_u * c * c);

  double tail_l = 0.0;
  for (std::size_t j = static_cast<std::size_t>(out.k_star_1);
       j < eigenvalues.size(); ++j)
    tail_l += eigenvalues[j];
  out.lower = 0.125 * (static_cast<double>(out.k_star_1) * sigma_sq / T +
                       tail_l * c * c);
  return out;
}

RateExponent optimal_rate_exponent(double a, double b) {
  if (!(a > 1.0) || !(b > 1.0))
    throw std::domain_error("optimal_rate_exponent: requires a > 1 and b > 1");
  RateExponent out;
  out.exponent = -1.0 + 1.0 / b;
  if (a <= b)
    out.regime = RateRegime::SgdOptimal;
  else if (a <= 2.0 * b)
    out.regime = RateRegime::ShbOptimal;
  else
    out.regime = RateRegime::NoKnownOptimal;
  return out;
}

}  // namespace shblab
