#include "wiretap/theta.hpp"

#include "wiretap/errors.hpp"
#include "wiretap/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace wiretap {

ThetaQuery::ThetaQuery(double tau_value) : tau(tau_value) {
  if (!(tau > 0.0)) throw InputError("theta query needs tau > 0");
}

ThetaQuery ThetaQuery::from_nome(double q) {
  if (!(q > 0.0 && q < 1.0)) throw InputError("nome must lie in (0, 1)");
  return ThetaQuery(-std::log(q) / std::numbers::pi);
}

double ThetaQuery::nome() const { return std::exp(-std::numbers::pi * tau); }

SeriesSum truncated_exponential_sum(const ShortVectorEnumerator& enumerator,
                                    double decay, std::span<const double> center,
                                    double tol, const SeriesLimits& limits) {
  if (!(decay > 0.0)) throw InputError("series decay must be positive");
  if (!(tol > 0.0)) throw InputError("series tolerance must be positive");
  if (static_cast<int>(center.size()) != enumerator.rank())
    throw InputError("series center has the wrong length");

  const double target = tol / 10.0;
  double radius = std::log(1.0 / target) / decay;
  SeriesSum best{0.0, 0.0, std::numeric_limits<double>::infinity(), 0.0, 0};
  while (true) {
    // Neumaier-compensated accumulation of everything except the origin term,
    // so value - 1 survives when the tail is far below machine epsilon.
    double sum = 0.0, carry = 0.0, origin = 0.0, shell = 0.0;
    std::size_t terms = 0;
    bool overflow = false;
    const double inner = 0.5 * radius;
    enumerator.visit(radius, center, [&](std::span<const std::int64_t> z, double norm) {
      const double term = std::exp(-decay * norm);
      if (norm > inner) shell += term;
      if (std::all_of(z.begin(), z.end(), [](std::int64_t v) { return v == 0; })) {
        origin = term;
      } else {
        const double t = sum + term;
        carry += std::abs(sum) >= term ? (sum - t) + term : (term - t) + sum;
        sum = t;
      }
      if (++terms > limits.max_terms) {
        overflow = true;
        return false;
      }
      return true;
    });
    if (overflow) {
      throw NumericalFailure("truncated series exceeded the term budget", best.value,
                             best.truncation_bound);
    }
    const double others = sum + carry;
    const double bound =
        10.0 * shell + static_cast<double>(terms) * std::exp(-decay * radius);
    best = {origin + others, others, bound, radius, terms};
    if (shell < target && std::exp(-decay * inner) <= target) return best;
    radius *= 2.0;
    if (radius > limits.max_radius) {
      throw NumericalFailure("truncated series exceeded the radius budget", best.value,
                             best.truncation_bound);
    }
  }
}

SeriesSum truncated_exponential_sum(const ShortVectorEnumerator& enumerator,
                                    double decay, double tol,
                                    const SeriesLimits& limits) {
  const std::vector<double> origin(enumerator.rank(), 0.0);
  return truncated_exponential_sum(enumerator, decay, origin, tol, limits);
}

ThetaValue theta_exact(const GramForm& gram, ThetaQuery query, double tol,
                       const SeriesLimits& limits) {
  const ShortVectorEnumerator enumerator(gram);
  const auto sum =
      truncated_exponential_sum(enumerator, std::numbers::pi * query.tau, tol, limits);
  return {1.0 + sum.value_without_origin, sum.truncation_bound, ThetaMode::exact};
}

namespace {

void check_nome(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw InputError("nome must lie in [0, 1)");
}

constexpr double kJacobiCutoff = 1e-16;

}  // namespace

double jacobi_theta2(double q) {
  check_nome(q);
  if (q == 0.0) return 0.0;
  // 2 sum_{k>=0} q^{(k+1/2)^2}
  const double log_q = std::log(q);
  double sum = 0.0;
  for (int k = 0;; ++k) {
    const double e = (k + 0.5) * (k + 0.5);
    const double term = std::exp(e * log_q);
    sum += term;
    if (term < kJacobiCutoff * sum) break;
  }
  return 2.0 * sum;
}

double jacobi_theta3(double q) {
  check_nome(q);
  double sum = 0.0;
  double power = q;
  // q^{k^2} via q^{(k+1)^2} = q^{k^2} q^{2k+1}
  double step = q;
  while (power >= kJacobiCutoff * (1.0 + 2.0 * sum) && power > 0.0) {
    sum += power;
    step *= q * q;
    power *= step;
  }
  return 1.0 + 2.0 * sum;
}

double jacobi_theta4(double q) {
  check_nome(q);
  double sum = 0.0;
  double power = q;
  double step = q;
  double sign = -1.0;
  while (power >= kJacobiCutoff && power > 0.0) {
    sum += sign * power;
    sign = -sign;
    step *= q * q;
    power *= step;
  }
  return 1.0 + 2.0 * sum;
}

double theta_closed_form(ClosedFormFamily family, int n, double q) {
  check_nome(q);
  switch (family) {
    case ClosedFormFamily::integer_lattice:
      if (n < 1) throw InputError("Z^n needs n >= 1");
      return std::pow(jacobi_theta3(q), n);
    case ClosedFormFamily::d4: {
      const double t3 = jacobi_theta3(q);
      const double t4 = jacobi_theta4(q);
      return 0.5 * (std::pow(t3, 4) + std::pow(t4, 4));
    }
  }
  throw InputError("unknown closed-form family");
}

ApproxParams approx_params(const GramForm& gram) {
  return {gram.rank(), gram.volume(), minimal_norm(gram).value};
}

ThetaValue theta_approx(const ApproxParams& params, double tau) {
  if (params.dimension < 1 || !(params.volume > 0.0) || !(params.minimal_norm > 0.0))
    throw InputError("approximation parameters must be positive");
  if (!(tau > 0.0)) throw InputError("theta query needs tau > 0");
  const double half = 0.5 * params.dimension;
  const double q = regularized_gamma_q(half + 1.0, std::numbers::pi * tau * params.minimal_norm);
  const double value = 1.0 + q / (params.volume * std::pow(tau, half));
  return {value, 0.0, ThetaMode::approx};
}

}  // namespace wiretap
