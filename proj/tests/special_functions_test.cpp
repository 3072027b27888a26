#include "wiretap/special_functions.hpp"

#include "gtest/gtest.h"
#include "wiretap/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

namespace wiretap {
namespace {

TEST(IncompleteGamma, FrozenValues) {
  // Gamma(1, x) = e^{-x}; Gamma(2, x) = (1 + x) e^{-x}.
  EXPECT_NEAR(incomplete_gamma_upper(1.0, 2.0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(incomplete_gamma_upper(2.0, 3.0), 4.0 * std::exp(-3.0), 1e-14);
  // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x)).
  EXPECT_NEAR(incomplete_gamma_upper(0.5, 0.7),
              std::sqrt(M_PI) * std::erfc(std::sqrt(0.7)), 1e-14);
  // Gamma(3, 0) = 2.
  EXPECT_DOUBLE_EQ(incomplete_gamma_upper(3.0, 0.0), 2.0);
}

TEST(IncompleteGamma, MatchesBoostOverAGrid) {
  for (double s : {0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 11.0}) {
    for (double x : {1e-6, 0.01, 0.3, 1.0, 2.5, s, s + 1.0, 7.0, 20.0, 60.0}) {
      const double q = boost::math::gamma_q(s, x);
      const double p = boost::math::gamma_p(s, x);
      EXPECT_NEAR(regularized_gamma_q(s, x), q, 1e-13 * std::max(q, 1e-300) + 1e-300)
          << s << ' ' << x;
      EXPECT_NEAR(regularized_gamma_p(s, x), p, 1e-13 * std::max(p, 1e-300) + 1e-300)
          << s << ' ' << x;
      EXPECT_NEAR(incomplete_gamma_upper(s, x), boost::math::tgamma(s, x),
                  1e-12 * boost::math::tgamma(s, x));
    }
  }
}

TEST(IncompleteGamma, PAndQAreComplementary) {
  for (double s : {0.5, 2.0, 3.0})
    for (double x : {0.1, 1.0, 4.0})
      EXPECT_NEAR(regularized_gamma_p(s, x) + regularized_gamma_q(s, x), 1.0, 1e-14);
}

TEST(IncompleteGamma, Limits) {
  EXPECT_EQ(regularized_gamma_q(2.0, INFINITY), 0.0);
  EXPECT_EQ(regularized_gamma_p(2.0, INFINITY), 1.0);
  EXPECT_EQ(regularized_gamma_p(2.0, 0.0), 0.0);
}

TEST(IncompleteGamma, RejectsBadArguments) {
  EXPECT_THROW(incomplete_gamma_upper(0.0, 1.0), InputError);
  EXPECT_THROW(incomplete_gamma_upper(-1.0, 1.0), InputError);
  EXPECT_THROW(incomplete_gamma_upper(1.0, -1.0), InputError);
  EXPECT_THROW(incomplete_gamma_upper(1.0, std::nan("")), InputError);
}

}  // namespace
}  // namespace wiretap
