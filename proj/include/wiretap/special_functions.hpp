#pragma once

namespace wiretap {

/// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt for
/// s > 0, x >= 0. Power series below x = s + 1, Lentz continued fraction
/// above. Accurate to about 1e-13 relative.
double incomplete_gamma_upper(double s, double x);

/// Gamma(s, x) / Gamma(s).
double regularized_gamma_q(double s, double x);

/// 1 - Q(s, x), without the cancellation for small x.
double regularized_gamma_p(double s, double x);

}  // namespace wiretap
