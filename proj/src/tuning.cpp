#include "shblab/tuning.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shblab {
namespace {

double shrink_factor(double a, double b, double a_mult, double t_real) {
  return a_mult * std::pow(t_real, -(a - b) / b);
}

// Smallest integer horizon at which the strict momentum formula fits,
// found by doubling then bisecting; 0 if none fits below 2^62.
std::int64_t strict_feasible_horizon(double a, double b) {
  auto fits = [&](std::int64_t t) {
    const double tr = static_cast<double>(t);
    return shrink_factor(a, b, 256.0 * std::log2(tr) * std::log(tr), tr) <= 1.0;
  };
  std::int64_t hi = 16;
  while (hi < (std::int64_t{1} << 62) && !fits(hi)) hi *= 2;
  if (!fits(hi)) return 0;
  std::int64_t lo = hi / 2;  // lo fails (or is below the search start)
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (fits(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

TuningChoice select_parameters(double a, double b, double lambda1,
                               std::int64_t T, TuningMode mode, double c_A) {
  if (!(a > 1.0) || !(b > 1.0))
    throw std::domain_error("select_parameters: requires a > 1 and b > 1");
  if (!(lambda1 > 0.0))
    throw std::invalid_argument("select_parameters: lambda1 must be positive");
  if (T < 2)
    throw std::invalid_argument("select_parameters: T must be at least 2");
  if (mode == TuningMode::Practical && !(c_A > 0.0))
    throw std::invalid_argument("select_parameters: c_A must be positive");

  const double t_real = static_cast<double>(T);
  TuningChoice out;
  if (a <= b) {
    out.regime = RateRegime::SgdOptimal;
    out.beta = 0.0;
    out.eta0 = 0.5 / lambda1 * std::pow(t_real, a / b - 1.0);
  } else if (a <= 2.0 * b) {
    out.regime = RateRegime::ShbOptimal;
    const double a_mult = (mode == TuningMode::Strict)
                              ? 256.0 * std::log2(t_real) * std::log(t_real)
                              : c_A;
    const double shrink = shrink_factor(a, b, a_mult, t_real);
    if (shrink > 1.0) {
      std::string msg =
          "select_parameters: momentum formula malformed at T=" +
          std::to_string(T) + " (multiplier " + std::to_string(a_mult) +
          " times T^(-(a-b)/b) = " + std::to_string(shrink) + " exceeds 1)";
      if (mode == TuningMode::Strict) {
        const std::int64_t feasible = strict_feasible_horizon(a, b);
        msg += feasible > 0 ? "; strict mode needs T >= " +
                                  std::to_string(feasible)
                            : "; no feasible horizon below 2^62";
      } else {
        msg += "; reduce c_A or raise T to at least " +
               std::to_string(static_cast<std::int64_t>(
                   std::ceil(std::pow(c_A, b / (a - b)))));
      }
      throw std::domain_error(msg);
    }
    out.beta = (1.0 - shrink) * (1.0 - shrink);
    out.eta0 = 0.5 / lambda1;
    out.a_constant = a_mult;
  } else {
    // No tuning of this family is known to reach the floor here; hand back
    // the conservative momentum-free choice.
    out.regime = RateRegime::NoKnownOptimal;
    out.beta = 0.0;
    out.eta0 = 0.5 / lambda1;
  }
  return out;
}

}  // namespace shblab
