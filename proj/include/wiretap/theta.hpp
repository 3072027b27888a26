#pragma once

#include "wiretap/enumeration.hpp"
#include "wiretap/lattice.hpp"

#include <cstddef>
#include <span>

namespace wiretap {

/// Evaluation point of a theta series, q = exp(-pi * tau).
struct ThetaQuery {
  double tau;

  explicit ThetaQuery(double tau_value);
  static ThetaQuery from_nome(double q);
  double nome() const;
};

enum class ThetaMode { exact, closed_form, approx };

struct ThetaValue {
  double value;
  double truncation_bound;
  ThetaMode mode;
};

/// Limits on how far a truncated series may grow before giving up.
struct SeriesLimits {
  std::size_t max_terms = 50'000'000;
  double max_radius = 1e12;
};

/// Result of a truncated sum of exp(-decay * Q(z - center)).
struct SeriesSum {
  double value;
  /// The same sum without the z = 0 term. Equals value - 1 without
  /// cancellation when the center is the origin.
  double value_without_origin;
  double truncation_bound;
  double radius;
  std::size_t terms;
};

/// Sums exp(-decay * Q(z - center)) over all integer z.
///
/// Truncation: starting from radius ln(10/tol)/decay the radius doubles until
/// the outermost shell (R/2, R] contributes less than tol/10 and every term
/// beyond R/2 is itself below tol/10. The reported bound is ten times that
/// shell plus (terms enumerated) * exp(-decay * R), a monitored estimate of
/// the tail rather than a rigorous one. Throws NumericalFailure with the best
/// partial result when the limits are hit first.
SeriesSum truncated_exponential_sum(const ShortVectorEnumerator& enumerator,
                                    double decay, std::span<const double> center,
                                    double tol, const SeriesLimits& limits = {});

SeriesSum truncated_exponential_sum(const ShortVectorEnumerator& enumerator,
                                    double decay, double tol,
                                    const SeriesLimits& limits = {});

/// Sum of q^{z^t G z} with truncation error at most tol (per the rule above).
ThetaValue theta_exact(const GramForm& gram, ThetaQuery query, double tol,
                       const SeriesLimits& limits = {});

/// Jacobi theta constants, summed until the next term drops below 1e-16.
double jacobi_theta2(double q);
double jacobi_theta3(double q);
double jacobi_theta4(double q);

enum class ClosedFormFamily { integer_lattice, d4 };

/// Theta series of Z^n (theta3^n) or of D4 ((theta3^4 + theta4^4) / 2).
double theta_closed_form(ClosedFormFamily family, int n, double q);

struct ApproxParams {
  int dimension;
  double volume;
  double minimal_norm;
};

/// Parameters read off a Gram form: rank, sqrt(det G), minimal norm.
ApproxParams approx_params(const GramForm& gram);

/// Main term of the volume/minimal-norm approximation,
///   1 + Gamma(n/2 + 1, pi tau lambda_min) / (Gamma(n/2 + 1) nu tau^{n/2}),
/// which is the closed form of
///   1 + (pi lambda_min)^{n/2+1} tau / (Gamma(n/2+1) nu)
///         * int_1^inf t^{n/2} exp(-pi tau lambda_min t) dt.
ThetaValue theta_approx(const ApproxParams& params, double tau);

}  // namespace wiretap
