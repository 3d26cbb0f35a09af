#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "shblab/bounds.hpp"
#include "shblab/problem.hpp"
#include "shblab/rng.hpp"

using namespace shblab;

namespace {

std::vector<double> power_spectrum(std::size_t dim, double a) {
  SpectrumProfile sp;
  sp.kind = SpectrumProfile::Kind::PowerLaw;
  sp.a = a;
  return build_spectrum(sp, dim);
}

QuadraticProblem explicit_problem(std::vector<double> lam,
                                  std::vector<double> opt, double sigma_sq) {
  SpectrumProfile sp;
  sp.kind = SpectrumProfile::Kind::Explicit;
  sp.values = std::move(lam);
  OptimumProfile op;
  op.kind = OptimumProfile::Kind::Explicit;
  op.values = std::move(opt);
  return make_problem(sp, op, sp.values.size(), sigma_sq);
}

}  // namespace

TEST_CASE("effective dimension counts the contracted prefix") {
  const std::vector<double> lam = power_spectrum(100, 2.0);
  // lambda_k * 0.5 >= 1e-4  <=>  k^2 <= 5000  <=>  k <= 70.
  CHECK(effective_dimension(lam, 0.5, 0.0, 1e4) == 70);
}

TEST_CASE("effective dimension includes exact threshold ties") {
  const std::vector<double> lam = {1.0, 0.0625, 0.03125};
  // cut = (1 - 0) / 16 = 0.0625; the tie at index 2 is in.
  CHECK(effective_dimension(lam, 1.0, 0.0, 16.0) == 2);
}

TEST_CASE("effective dimension monotonicity") {
  const std::vector<double> lam = power_spectrum(500, 1.7);
  GaussianStream s(31, 0);
  for (int i = 0; i < 100; ++i) {
    const double eta = 0.05 + 0.45 * (s.uniform_pm1() + 1.0);
    const double beta = 0.45 * (s.uniform_pm1() + 1.0);
    const double T = 100.0 + 5000.0 * (s.uniform_pm1() + 1.0);
    const std::size_t base = effective_dimension(lam, eta, beta, T);
    CHECK(effective_dimension(lam, eta * 1.5, beta, T) >= base);
    CHECK(effective_dimension(lam, eta, std::min(0.99, beta + 0.3), T) >=
          base);
    CHECK(effective_dimension(lam, eta, beta, T * 2.0) >= base);
  }
}

TEST_CASE("scalar ceiling spot value") {
  const QuadraticProblem p = explicit_problem({1.0}, {1.0}, 0.0);
  const BoundReport rep = risk_bounds(p, 1.0, 0.0, 16.0);
  CHECK(rep.k_star == 1);
  const double a_const = 256.0 * 4.0 * std::log(16.0);
  CHECK(rep.a_constant == doctest::Approx(a_const).epsilon(1e-14));
  // Head bias term: 2^10 * (log2 16)^2 * A * 1 / (eta0 T) * w^2.
  const double bias = 1024.0 * 16.0 * a_const / 16.0;
  CHECK(rep.bias_bound == doctest::Approx(bias).epsilon(1e-13));
  CHECK(rep.variance_bound == 0.0);
  CHECK(rep.upper_total == doctest::Approx(bias).epsilon(1e-13));
  CHECK(rep.lower_bound == 0.0);  // sigma = 0 shrinks every hard coordinate
  CHECK(rep.validity.horizon_ok);
  CHECK(rep.validity.step_ok);
  CHECK(rep.validity.momentum_ok);  // beta = 0 always sits in the interval
}

TEST_CASE("variance side of the ceiling, split by the effective dimension") {
  const QuadraticProblem p =
      explicit_problem({1.0, 0.5, 0.001}, {1.0, 1.0, 1.0}, 0.3);
  const double eta0 = 0.5, T = 64.0;
  const BoundReport rep = risk_bounds(p, eta0, 0.0, T);
  // cut = 1/64 = 0.015625: first two are in, 0.001 is out.
  REQUIRE(rep.k_star == 2);
  const double a_const = 256.0 * 6.0 * std::log(64.0);
  const double head =
      (729.0 * eta0 * eta0 + 256.0 * a_const * a_const) * 2.0 / T;
  const double tail = 64.0 * eta0 * eta0 * (0.001 * 0.001) * T;
  CHECK(rep.variance_bound ==
        doctest::Approx(0.3 * (head + tail)).epsilon(1e-13));
}

TEST_CASE("validity flags trip on short horizons, big steps, big momentum") {
  const QuadraticProblem p = explicit_problem({2.0}, {1.0}, 0.1);
  CHECK_FALSE(risk_bounds(p, 0.25, 0.0, 8.0).validity.horizon_ok);
  CHECK_FALSE(risk_bounds(p, 0.6, 0.0, 64.0).validity.step_ok);
  // At T = 2^17 the admissible momentum tops out near 0.37.
  const double T = 131072.0;
  CHECK(risk_bounds(p, 0.25, 0.3, T).validity.momentum_ok);
  CHECK_FALSE(risk_bounds(p, 0.25, 0.5, T).validity.momentum_ok);
  // Desk-scale horizons leave no admissible momentum at all.
  CHECK_FALSE(risk_bounds(p, 0.25, 0.01, 1024.0).validity.momentum_ok);
  CHECK(risk_bounds(p, 0.25, 0.0, 1024.0).validity.momentum_ok);
}

TEST_CASE("hard instance splits coordinates at the noise floor") {
  const std::vector<double> lam = {1.0};
  const std::vector<double> wbar = {1.0};
  const HardInstance inst = hard_instance_coords(lam, wbar, 1.0, 100.0);
  REQUIRE(inst.coords.size() == 1);
  CHECK(inst.set_size == 1);
  CHECK(inst.in_set[0]);
  CHECK(inst.coords[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(minimax_lower_bound(lam, wbar, 1.0, 100.0) ==
        doctest::Approx(0.00125).epsilon(1e-15));
}

TEST_CASE("floor value equals both summation routes") {
  GaussianStream s(37, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t dim = 2 + static_cast<std::size_t>(
                                    20.0 * 0.5 * (s.uniform_pm1() + 1.0));
    std::vector<double> lam(dim), wbar(dim);
    double level = 2.0;
    for (std::size_t i = 0; i < dim; ++i) {
      level *= 0.4 + 0.3 * (s.uniform_pm1() + 1.0);
      lam[i] = level;
      wbar[i] = std::abs(s.normal()) + 1e-3;
    }
    const double sigma_sq = 0.01 + (s.uniform_pm1() + 1.0);
    const double T = 50.0 + 1000.0 * (s.uniform_pm1() + 1.0);

    const HardInstance inst = hard_instance_coords(lam, wbar, sigma_sq, T);
    // Route 1: |set| sigma^2/T + sum of excluded lambda wbar^2.
    double route1 = static_cast<double>(inst.set_size) * sigma_sq / T;
    for (std::size_t i = 0; i < dim; ++i)
      if (!inst.in_set[i]) route1 += lam[i] * wbar[i] * wbar[i];
    // Route 2: plug the hard coordinates back into the quadratic.
    double route2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      route2 += lam[i] * inst.coords[i] * inst.coords[i];
    // Route 3: elementwise min.
    double route3 = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      route3 += std::min(sigma_sq / T, lam[i] * wbar[i] * wbar[i]);

    const double value = minimax_lower_bound(lam, wbar, sigma_sq, T);
    CHECK(value == doctest::Approx(0.125 * route1).epsilon(1e-12));
    CHECK(value == doctest::Approx(0.125 * route2).epsilon(1e-12));
    CHECK(value == doctest::Approx(0.125 * route3).epsilon(1e-12));
  }
}

TEST_CASE("floor is monotone in horizon and noise") {
  GaussianStream s(41, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t dim = 3 + static_cast<std::size_t>(
                                    10.0 * 0.5 * (s.uniform_pm1() + 1.0));
    std::vector<double> lam(dim), wbar(dim);
    double level = 1.0;
    for (std::size_t i = 0; i < dim; ++i) {
      level *= 0.5 + 0.25 * (s.uniform_pm1() + 1.0);
      lam[i] = level;
      wbar[i] = std::abs(s.normal()) + 1e-3;
    }
    const double s2a = 0.01 + 0.5 * (s.uniform_pm1() + 1.0);
    const double s2b = s2a + 0.5 * (s.uniform_pm1() + 1.0);
    const double t1 = 20.0 + 500.0 * (s.uniform_pm1() + 1.0);
    const double t2 = t1 * (1.0 + (s.uniform_pm1() + 1.0));

    CHECK(minimax_lower_bound(lam, wbar, s2a, t2) <=
          minimax_lower_bound(lam, wbar, s2a, t1) + 1e-18);
    CHECK(minimax_lower_bound(lam, wbar, s2b, t1) + 1e-18 >=
          minimax_lower_bound(lam, wbar, s2a, t1));
  }
}

TEST_CASE("box-constrained bracket: exponential spectrum cutoffs") {
  SpectrumProfile sp;
  sp.kind = SpectrumProfile::Kind::Exponential;
  const std::vector<double> lam = build_spectrum(sp, 20);
  const double T = std::exp(10.0);
  const LinfBounds lb = linf_bounds(lam, 1.0, 1.0, T, 0.5);
  CHECK(lb.k_star_1 == 10);  // e^-i >= e^-10 through i = 10
  CHECK(lb.k_star == 10);
  CHECK(lb.upper > 0.0);
  CHECK(lb.lower > 0.0);

  // Spot value of the floor: k1 s2/T + tail levels.
  double tail = 0.0;
  for (std::size_t j = 10; j < lam.size(); ++j) tail += lam[j];
  CHECK(lb.lower ==
        doctest::Approx(0.125 * (10.0 / T + tail)).epsilon(1e-13));
}

TEST_CASE("box-constrained bracket guards") {
  const std::vector<double> lam = power_spectrum(10, 2.0);
  CHECK_THROWS_AS(linf_bounds(lam, 0.0, 1.0, 100.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(linf_bounds(lam, -1.0, 1.0, 100.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(linf_bounds(lam, 1.0, 1.0, 100.0, 1.5),
                  std::invalid_argument);  // eta0 above 1/lambda_1
}

TEST_CASE("rate exponent table") {
  const RateExponent r1 = optimal_rate_exponent(1.5, 3.0);
  CHECK(r1.exponent == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
  CHECK(r1.regime == RateRegime::SgdOptimal);

  const RateExponent r2 = optimal_rate_exponent(1.25, 3.75);
  CHECK(r2.exponent == doctest::Approx(-1.0 + 1.0 / 3.75).epsilon(1e-15));
  CHECK(r2.regime == RateRegime::SgdOptimal);

  const RateExponent r3 = optimal_rate_exponent(5.0, 2.0);
  CHECK(r3.exponent == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(r3.regime == RateRegime::NoKnownOptimal);

  CHECK(optimal_rate_exponent(3.0, 2.0).regime == RateRegime::ShbOptimal);
  CHECK(optimal_rate_exponent(2.0, 2.0).regime == RateRegime::SgdOptimal);
  CHECK(optimal_rate_exponent(4.0, 2.0).regime == RateRegime::ShbOptimal);

  CHECK_THROWS_AS(optimal_rate_exponent(1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(optimal_rate_exponent(2.0, 1.0), std::domain_error);
}
