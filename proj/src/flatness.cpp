#include "wiretap/flatness.hpp"

#include "wiretap/enumeration.hpp"
#include "wiretap/errors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace wiretap {

namespace {

constexpr double kVolumeTolerance = 1e-8;

// log of (sqrt(2 pi) sigma)^{-n}
double log_gaussian_normalizer(SigmaParam sigma, int n) {
  return -n * (0.5 * std::log(2.0 * std::numbers::pi) + std::log(sigma.sigma()));
}

FlatnessValue finish(double epsilon, double bound, Representation representation) {
  FlatnessValue value{epsilon, bound, representation, false};
  if (value.epsilon < 0.0) {
    value.clamped = true;
    value.epsilon = 0.0;
  }
  return value;
}

}  // namespace

SigmaParam::SigmaParam(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("sigma must be positive");
}

SigmaParam SigmaParam::from_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("tau must be positive");
  return SigmaParam(1.0 / std::sqrt(2.0 * std::numbers::pi * tau));
}

double SigmaParam::tau() const noexcept {
  return 1.0 / (2.0 * std::numbers::pi * sigma_ * sigma_);
}

double dual_decay(SigmaParam sigma) {
  return 2.0 * std::numbers::pi * std::numbers::pi * sigma.sigma() * sigma.sigma();
}

double gaussian_sum(const GramForm& gram, SigmaParam sigma, std::span<const double> shift,
                    double tol, const SeriesLimits& limits) {
  if (static_cast<int>(shift.size()) != gram.rank())
    throw InputError("shift has the wrong number of coefficients");
  const double log_norm = log_gaussian_normalizer(sigma, gram.rank());
  std::vector<double> center(shift.size());
  for (std::size_t i = 0; i < shift.size(); ++i) center[i] = -shift[i];
  const ShortVectorEnumerator enumerator(gram);
  const double decay = 1.0 / (2.0 * sigma.sigma() * sigma.sigma());
  const auto sum = truncated_exponential_sum(enumerator, decay, center,
                                             tol * std::exp(-log_norm), limits);
  return std::exp(log_norm) * sum.value;
}

FlatnessValue flatness_primal(const GramForm& gram, double volume, SigmaParam sigma,
                              double tol, const SeriesLimits& limits) {
  // epsilon = c * Theta - 1 with c = nu / (sqrt(2 pi) sigma)^n
  const double log_c = std::log(volume) + log_gaussian_normalizer(sigma, gram.rank());
  const double c = std::exp(log_c);
  const ShortVectorEnumerator enumerator(gram);
  const double decay = 1.0 / (2.0 * sigma.sigma() * sigma.sigma());
  const auto sum = truncated_exponential_sum(enumerator, decay, tol / c, limits);
  const double epsilon = std::expm1(log_c) + c * sum.value_without_origin;
  return finish(epsilon, c * sum.truncation_bound, Representation::primal);
}

FlatnessValue flatness_dual(const GramForm& gram, SigmaParam sigma, double tol,
                            const SeriesLimits& limits) {
  const ShortVectorEnumerator enumerator(gram.inverse());
  const auto sum = truncated_exponential_sum(enumerator, dual_decay(sigma), tol, limits);
  return finish(sum.value_without_origin, sum.truncation_bound, Representation::dual);
}

Representation choose_representation(double primal_minimum, double dual_minimum,
                                     SigmaParam sigma) {
  // Compare exp(-lambda / (2 sigma^2)) with exp(-2 pi^2 sigma^2 lambda*).
  const double primal_exponent = primal_minimum / (2.0 * sigma.sigma() * sigma.sigma());
  const double dual_exponent = dual_decay(sigma) * dual_minimum;
  return primal_exponent > dual_exponent ? Representation::primal : Representation::dual;
}

FlatnessValue flatness_from_gram(const GramForm& gram, double volume, SigmaParam sigma,
                                 double tol, const SeriesLimits& limits) {
  if (!(tol > 0.0)) throw InputError("flatness tolerance must be positive");
  const double expected = gram.volume();
  if (!(volume > 0.0) || std::abs(volume - expected) > kVolumeTolerance * expected)
    throw InputError("volume is inconsistent with the Gram determinant");
  const double primal_minimum = minimal_norm(gram).value;
  const double dual_minimum = minimal_norm(gram.inverse()).value;
  if (choose_representation(primal_minimum, dual_minimum, sigma) == Representation::primal)
    return flatness_primal(gram, volume, sigma, tol, limits);
  return flatness_dual(gram, sigma, tol, limits);
}

FlatnessValue flatness_factor(const Lattice& lattice, SigmaParam sigma, double tol,
                              const SeriesLimits& limits) {
  if (!lattice.is_full()) throw InputError("flatness factor needs a full lattice");
  const GramForm g = gram(lattice);
  return flatness_from_gram(g, g.volume(), sigma, tol, limits);
}

}  // namespace wiretap
