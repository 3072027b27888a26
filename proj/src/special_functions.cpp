#include "wiretap/special_functions.hpp"

#include "wiretap/errors.hpp"

#include <cmath>
#include <limits>

namespace wiretap {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min() / kEpsilon;
constexpr int kMaxIterations = 100000;

// log of x^s e^{-x} / Gamma(s), the common prefactor of both expansions.
double log_prefactor(double s, double x) {
  return s * std::log(x) - x - std::lgamma(s);
}

// Regularized lower gamma P(s, x) by its power series; converges fast for
// x < s + 1.
double lower_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  double denom = s;
  for (int i = 0; i < kMaxIterations; ++i) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * std::exp(log_prefactor(s, x));
}

// Regularized upper gamma Q(s, x) by the Legendre continued fraction,
// evaluated with the modified Lentz method.
double upper_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) <= kEpsilon) break;
  }
  return std::exp(log_prefactor(s, x)) * h;
}

void check_arguments(double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InputError("incomplete gamma needs s > 0");
  if (!(x >= 0.0)) throw InputError("incomplete gamma needs x >= 0");
}

}  // namespace

double regularized_gamma_q(double s, double x) {
  check_arguments(s, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) return 1.0 - lower_series(s, x);
  return upper_fraction(s, x);
}

double regularized_gamma_p(double s, double x) {
  check_arguments(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) return lower_series(s, x);
  return 1.0 - upper_fraction(s, x);
}

double incomplete_gamma_upper(double s, double x) {
  return regularized_gamma_q(s, x) * std::tgamma(s);
}

}  // namespace wiretap
