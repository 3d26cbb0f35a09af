#pragma once

#include <complex>
#include <cstdint>

namespace shblab {

// Row-major 2x2 matrix, the only dense object in the per-coordinate moment
// recursions.
struct Mat2 {
  double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;
};

Mat2 mat_mul(const Mat2& x, const Mat2& y);
Mat2 mat_identity();
Mat2 mat_power(Mat2 base, std::uint64_t k);  // binary exponentiation, A^0 = I
double frobenius_norm(const Mat2& m);
double operator_norm(const Mat2& m);         // largest singular value
double mat_det(const Mat2& m);
double mat_trace(const Mat2& m);

// One-step iteration matrix of the momentum recursion for one coordinate,
//   [[1 + beta - eta*lambda, -beta], [1, 0]];
// det = beta and trace = 1 + beta - eta*lambda by construction.
Mat2 momentum_matrix(double beta, double eta_lambda);

struct SpectralInfo {
  double discriminant = 0.0;    // trace^2 - 4 beta
  std::complex<double> gamma1;  // |gamma1| >= |gamma2|
  std::complex<double> gamma2;
  double spectral_radius = 0.0;
  bool complex_pair = false;
};

// Closed-form eigenstructure of momentum_matrix(beta, eta_lambda). A complex
// pair has modulus exactly sqrt(beta); in the real branch with
// 0 < eta_lambda <= (1 - sqrt(beta))^2 the radius obeys
//   rho <= 1 - eta_lambda/2 - eta_lambda / (4 (1 - sqrt(beta))).
SpectralInfo spectral_info(double beta, double eta_lambda);

// ||A^k||_F by repeated multiplication, k >= 1.
double frobenius_power_norm(double beta, double eta_lambda, int k);

struct AsBs {
  double a_s = 0.0;
  double b_s = 0.0;
  // eta0*lambda < 256*log2(T)*ln(T) * (1 - sqrt(beta)) / (2T); the regime in
  // which 0 <= a_s < 1 and |b_s| <= 8*eta0*lambda / (1 - sqrt(beta)).
  bool hypothesis_ok = false;
};

// Writes (A_s)^K [1;1] in the basis {[1;1], [0;1]}, where A_s is the
// iteration matrix of stage `stage` (step eta0 / 4^stage). Values are
// computed regardless of the hypothesis flag.
AsBs as_bs_decomposition(double beta, double eta0_lambda, std::uint64_t K,
                         int stage, std::int64_t T);

}  // namespace shblab
