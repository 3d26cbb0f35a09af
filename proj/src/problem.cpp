#include "shblab/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shblab {

std::vector<double> build_spectrum(const SpectrumProfile& profile,
                                   std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("spectrum: dim must be positive");
  std::vector<double> out(dim);
  switch (profile.kind) {
    case SpectrumProfile::Kind::PowerLaw:
      if (!(profile.c > 0.0))
        throw std::invalid_argument("spectrum: power_law scale c must be positive");
      for (std::size_t i = 0; i < dim; ++i)
        out[i] = profile.c * std::pow(static_cast<double>(i + 1), -profile.a);
      break;
    case SpectrumProfile::Kind::LogAdjusted:
      for (std::size_t i = 0; i < dim; ++i) {
        const double idx = static_cast<double>(i + 1);
        out[i] = std::pow(std::log(idx + 1.0), -profile.c) / idx;
      }
      break;
    case SpectrumProfile::Kind::Exponential:
      for (std::size_t i = 0; i < dim; ++i)
        out[i] = std::exp(-static_cast<double>(i + 1));
      break;
    case SpectrumProfile::Kind::Explicit:
      if (profile.values.size() != dim)
        throw std::invalid_argument(
            "spectrum: explicit list length does not match dim");
      out = profile.values;
      break;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if (!std::isfinite(out[i]) || !(out[i] > 0.0))
      throw std::invalid_argument("spectrum: eigenvalue " +
                                  std::to_string(i + 1) +
                                  " is not positive and finite");
    if (i > 0 && out[i] > out[i - 1])
      throw std::invalid_argument(
          "spectrum: eigenvalues must be non-increasing (violated at index " +
          std::to_string(i + 1) + ")");
  }
  return out;
}

std::vector<double> build_optimum(const OptimumProfile& profile,
                                  std::span<const double> eigenvalues) {
  const std::size_t dim = eigenvalues.size();
  std::vector<double> out(dim);
  switch (profile.kind) {
    case OptimumProfile::Kind::SourceCondition:
      for (std::size_t i = 0; i < dim; ++i) {
        const double signal =
            std::pow(static_cast<double>(i + 1), -profile.b);
        out[i] = std::sqrt(signal / eigenvalues[i]);
      }
      break;
    case OptimumProfile::Kind::LinfConstant:
      if (!(profile.c > 0.0))
        throw std::invalid_argument("optimum: linf level c must be positive");
      for (std::size_t i = 0; i < dim; ++i) out[i] = profile.c;
      break;
    case OptimumProfile::Kind::Explicit:
      if (profile.values.size() != dim)
        throw std::invalid_argument(
            "optimum: explicit list length does not match dim");
      out = profile.values;
      break;
  }
  for (std::size_t i = 0; i < dim; ++i)
    if (!std::isfinite(out[i]))
      throw std::invalid_argument("optimum: coordinate " +
                                  std::to_string(i + 1) + " is not finite");
  return out;
}

QuadraticProblem make_problem(const SpectrumProfile& spectrum,
                              const OptimumProfile& optimum, std::size_t dim,
                              double sigma_sq) {
  if (!(sigma_sq >= 0.0))
    throw std::invalid_argument("problem: sigma_sq must be nonnegative");
  QuadraticProblem p;
  p.eigenvalues = build_spectrum(spectrum, dim);
  p.optimum = build_optimum(optimum, p.eigenvalues);
  p.sigma_sq = sigma_sq;
  return p;
}

double excess_risk(const QuadraticProblem& problem, std::span<const double> w) {
  if (w.size() != problem.dim())
    throw std::invalid_argument("excess_risk: dimension mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double dev = w[j] - problem.optimum[j];
    acc += problem.eigenvalues[j] * dev * dev;
  }
  return 0.5 * acc;
}

void sample_gradient(const QuadraticProblem& problem, std::span<const double> w,
                     GaussianStream& stream, std::span<double> g_out) {
  if (w.size() != problem.dim() || g_out.size() != problem.dim())
    throw std::invalid_argument("sample_gradient: dimension mismatch");
  if (problem.sigma_sq == 0.0) {
    for (std::size_t j = 0; j < w.size(); ++j)
      g_out[j] = problem.eigenvalues[j] * (w[j] - problem.optimum[j]);
    return;
  }
  const double sigma = std::sqrt(problem.sigma_sq);
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double lambda = problem.eigenvalues[j];
    g_out[j] = lambda * (w[j] - problem.optimum[j]) +
               sigma * std::sqrt(lambda) * stream.normal();
  }
}

}  // namespace shblab
