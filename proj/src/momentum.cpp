#include "shblab/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shblab {

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
          x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
}

Mat2 mat_identity() { return {1.0, 0.0, 0.0, 1.0}; }

Mat2 mat_power(Mat2 base, std::uint64_t k) {
  Mat2 acc = mat_identity();
  while (k > 0) {
    if (k & 1) acc = mat_mul(acc, base);
    base = mat_mul(base, base);
    k >>= 1;
  }
  return acc;
}

double frobenius_norm(const Mat2& m) {
  return std::sqrt(m.m00 * m.m00 + m.m01 * m.m01 + m.m10 * m.m10 +
                   m.m11 * m.m11);
}

double operator_norm(const Mat2& m) {
  // Largest singular value from the 2x2 Gram matrix closed form.
  const double a = m.m00 * m.m00 + m.m01 * m.m01;
  const double d = m.m10 * m.m10 + m.m11 * m.m11;
  const double b = m.m00 * m.m10 + m.m01 * m.m11;
  const double gap = std::hypot(a - d, 2.0 * b);
  return std::sqrt(std::max(0.0, 0.5 * (a + d + gap)));
}

double mat_det(const Mat2& m) { return m.m00 * m.m11 - m.m01 * m.m10; }
double mat_trace(const Mat2& m) { return m.m00 + m.m11; }

Mat2 momentum_matrix(double beta, double eta_lambda) {
  return {1.0 + beta - eta_lambda, -beta, 1.0, 0.0};
}

SpectralInfo spectral_info(double beta, double eta_lambda) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("spectral_info: beta must lie in [0,1)");
  if (!(eta_lambda >= 0.0))
    throw std::invalid_argument("spectral_info: eta_lambda must be >= 0");
  SpectralInfo info;
  const double tr = 1.0 + beta - eta_lambda;
  info.discriminant = tr * tr - 4.0 * beta;
  if (info.discriminant < 0.0) {
    const double imag = 0.5 * std::sqrt(-info.discriminant);
    info.gamma1 = {0.5 * tr, imag};
    info.gamma2 = {0.5 * tr, -imag};
    info.spectral_radius = std::sqrt(beta);  // |gamma|^2 = det = beta
    info.complex_pair = true;
  } else {
    const double root = std::sqrt(info.discriminant);
    double g1 = 0.5 * (tr + root);
    double g2 = 0.5 * (tr - root);
    if (std::abs(g2) > std::abs(g1)) std::swap(g1, g2);
    info.gamma1 = g1;
    info.gamma2 = g2;
    info.spectral_radius = std::abs(g1);
    info.complex_pair = false;
  }
  return info;
}

double frobenius_power_norm(double beta, double eta_lambda, int k) {
  if (k < 1) throw std::invalid_argument("frobenius_power_norm: k must be >= 1");
  const Mat2 a = momentum_matrix(beta, eta_lambda);
  Mat2 acc = a;
  for (int i = 1; i < k; ++i) acc = mat_mul(acc, a);
  return frobenius_norm(acc);
}

AsBs as_bs_decomposition(double beta, double eta0_lambda, std::uint64_t K,
                         int stage, std::int64_t T) {
  if (!(beta >= 0.0 && beta < 1.0))
    throw std::invalid_argument("as_bs_decomposition: beta must lie in [0,1)");
  if (!(eta0_lambda >= 0.0))
    throw std::invalid_argument("as_bs_decomposition: eta0_lambda must be >= 0");
  if (K == 0) throw std::invalid_argument("as_bs_decomposition: K must be >= 1");
  if (stage < 0) throw std::invalid_argument("as_bs_decomposition: stage must be >= 0");
  if (T < 2) throw std::invalid_argument("as_bs_decomposition: T must be >= 2");

  // M [1;1] = a [1;1] + b [0;1] with, writing S_k for the Chebyshev-like
  // sequence S_{k+1} = tr S_k - beta S_{k-1}, S_0 = 0, S_1 = 1:
  //   a_s = S_{K+1} - beta S_K = (g1^K (g1-beta) - g2^K (g2-beta)) / (g1-g2)
  //   b_s = eta lambda S_K.
  // Repeated squaring is useless here: at stage steps around 1e-20 the
  // matrix powers cancel from entries of size 1/(1-beta) back down to
  // a_s ~ 1, and the rounding noise lands exactly where the [0,1) law is
  // checked. Each eigen-factor below is arranged so that no two nearly
  // equal quantities are ever subtracted.
  const double e = std::ldexp(eta0_lambda, -2 * stage);
  const double kd = static_cast<double>(K);
  const double sb = std::sqrt(beta);
  if (e == 0.0) {
    // A fixes the all-ones direction exactly.
    AsBs fixed;
    fixed.a_s = 1.0;
    fixed.b_s = 0.0;
    const double t_fixed = static_cast<double>(T);
    fixed.hypothesis_ok =
        eta0_lambda > 0.0 &&
        eta0_lambda < 256.0 * std::log2(t_fixed) * std::log(t_fixed) *
                          (1.0 - sb) / (2.0 * t_fixed);
    return fixed;
  }
  const double tr = 1.0 + beta - e;
  // Discriminant factored through its roots: tr^2 - 4 beta = lo * hi exactly.
  const double lo = (1.0 - sb) * (1.0 - sb) - e;
  const double hi = (1.0 + sb) * (1.0 + sb) - e;

  AsBs r;
  if (lo < 0.0 && hi > 0.0) {
    // Oscillatory pair at modulus sqrt(beta); S_k = rho^{k-1} sin(k th)/sin th.
    const double root = std::sqrt(-lo) * std::sqrt(hi);  // 2 rho sin(theta)
    const double theta = std::atan2(root, tr);
    const double rho_k = std::exp(0.5 * kd * std::log(beta));
    const double sk = std::sin(kd * theta);
    r.a_s = rho_k * (sk * (1.0 - beta - e) / root + std::cos(kd * theta));
    r.b_s = 2.0 * e * rho_k * sk / root;
  } else if (tr > 0.0 && lo >= 0.0) {
    // Contractive real pair; g1 can sit within one ulp of 1. With u = 1-beta,
    // g1 g2 = beta and g1 + g2 = tr give the exact rationalizations
    //   1 - g1    = 2e / (u + e + delta)
    //   g1 - beta = (u - e + delta) / 2
    //   g2 - beta = 4 beta e / ((tr + delta)(u + e + delta)),
    // every factor a single subtraction of well-separated terms.
    const double delta = std::sqrt(lo) * std::sqrt(hi);
    const double u = 1.0 - beta;
    const double psi = beta > 0.0 ? std::asinh(0.5 * delta / sb)
                                  : std::numeric_limits<double>::infinity();
    if (kd * psi < 0.5) {
      // Near-confluent root: g_{1,2} = sb e^{+-psi}; the sinh forms keep the
      // g1^K - g2^K cancellation symbolic and every argument is < 1.
      const double mk = std::exp(0.5 * kd * std::log(beta));
      const double sh = std::sinh(psi);
      const double ratio = sh > 0.0 ? std::sinh(kd * psi) / sh : kd;
      r.a_s = mk * (ratio * (std::cosh(psi) - sb) + std::cosh(kd * psi));
      r.b_s = e * (mk / sb) * ratio;
    } else {
      const double denom = u + e + delta;
      const double g1 = 0.5 * (tr + delta);
      const double g1k = std::exp(kd * std::log1p(-2.0 * e / denom));
      const double g2k = std::exp(kd * std::log(beta / g1));  // beta=0 -> 0
      const double q1 = 0.5 * (u - e + delta);
      const double q2 = 4.0 * beta * e / ((tr + delta) * denom);
      r.a_s = (g1k * q1 - g2k * q2) / delta;
      r.b_s = e * (g1k - g2k) / delta;
    }
  } else {
    // Expansive side, eta lambda >= (1+sqrt(beta))^2: outside every law's
    // domain and the powers blow up anyway; direct powering is adequate.
    const Mat2 m = mat_power(momentum_matrix(beta, e), K);
    r.a_s = m.m00 + m.m01;
    r.b_s = (m.m10 + m.m11) - r.a_s;
  }

  const double t_real = static_cast<double>(T);
  const double a_const = 256.0 * std::log2(t_real) * std::log(t_real);
  r.hypothesis_ok =
      eta0_lambda > 0.0 &&
      eta0_lambda < a_const * (1.0 - std::sqrt(beta)) / (2.0 * t_real);
  return r;
}

}  // namespace shblab
