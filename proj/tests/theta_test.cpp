#include "wiretap/theta.hpp"

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "wiretap/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace wiretap {
namespace {

constexpr double kPi = std::numbers::pi;

// theta3(e^{-pi}) = pi^{1/4} / Gamma(3/4).
const double kTheta3AtOne = std::pow(kPi, 0.25) / std::tgamma(0.75);

TEST(Jacobi, SpecialValue) {
  EXPECT_NEAR(jacobi_theta3(std::exp(-kPi)), kTheta3AtOne, 1e-15);
  EXPECT_NEAR(kTheta3AtOne, 1.0864348112133080, 1e-15);
}

TEST(Jacobi, QuarticIdentity) {
  for (double q : {0.01, 0.1, 0.3, 0.6, 0.9}) {
    const double t2 = jacobi_theta2(q), t3 = jacobi_theta3(q), t4 = jacobi_theta4(q);
    EXPECT_NEAR(std::pow(t3, 4), std::pow(t2, 4) + std::pow(t4, 4), 1e-12 * std::pow(t3, 4));
  }
  EXPECT_EQ(jacobi_theta3(0.0), 1.0);
  EXPECT_THROW(jacobi_theta3(1.0), InputError);
}

TEST(ThetaExact, IntegerLatticeSpecialValue) {
  const auto v = theta_exact(GramForm(Matrix::Identity(2, 2)), ThetaQuery(1.0), 1e-12);
  EXPECT_NEAR(v.value, kTheta3AtOne * kTheta3AtOne, 1e-12);
  EXPECT_NEAR(v.value, 1.1803405990160962, 1e-12);
  EXPECT_LE(v.truncation_bound, 1e-12);
}

TEST(ThetaExact, MatchesClosedForms) {
  const GramForm d4 = gram(catalog("D4"));
  for (double tau : {0.5, 1.0, 2.0, 5.0}) {
    const ThetaQuery query(tau);
    const double q = query.nome();
    EXPECT_NEAR(theta_exact(d4, query, 1e-12).value,
                theta_closed_form(ClosedFormFamily::d4, 4, q), 1e-11);
    for (int n = 1; n <= 4; ++n) {
      EXPECT_NEAR(theta_exact(GramForm(Matrix::Identity(n, n)), query, 1e-12).value,
                  theta_closed_form(ClosedFormFamily::integer_lattice, n, q), 1e-11);
    }
  }
}

TEST(ThetaExact, LeadingCoefficientsOfD4) {
  // 1 + 24 q^2 + 24 q^4 + 96 q^6 + ...
  const double q = 1e-3;
  const double expected = 1 + 24 * q * q + 24 * std::pow(q, 4) + 96 * std::pow(q, 6);
  EXPECT_NEAR(theta_closed_form(ClosedFormFamily::d4, 4, q), expected, 1e-17);
  const auto v = theta_exact(gram(catalog("D4")), ThetaQuery::from_nome(q), 1e-15);
  EXPECT_NEAR(v.value - 1.0, expected - 1.0, 1e-15);
}

TEST(ThetaExact, TailStaysBelowTolerance) {
  const GramForm g = gram(catalog("Gamma1"));
  const double reference = theta_exact(g, ThetaQuery(0.05), 1e-14).value;
  for (double tol : {1e-3, 1e-6, 1e-9}) {
    const auto v = theta_exact(g, ThetaQuery(0.05), tol);
    EXPECT_LE(v.truncation_bound, tol);
    EXPECT_NEAR(v.value, reference, tol);
  }
}

TEST(ThetaExact, PoissonDuality) {
  // Theta_L(tau) = Theta_{L*}(1 / tau) / (nu tau^{n/2}).
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Lattice l = testing::random_integer_lattice(rng, 3, 2);
    const GramForm g = gram(l);
    const double nu = volume(l);
    for (double tau : {0.3, 1.0}) {
      const double lhs = theta_exact(g, ThetaQuery(tau), 1e-13).value;
      const double rhs = theta_exact(g.inverse(), ThetaQuery(1.0 / tau), 1e-13).value /
                         (nu * std::pow(tau, 1.5));
      EXPECT_NEAR(lhs, rhs, 1e-10 * lhs);
    }
  }
}

TEST(ThetaExact, ScalingMovesTau) {
  const GramForm g = gram(catalog("Pi2"));
  EXPECT_NEAR(theta_exact(g.scaled(4.0), ThetaQuery(0.1), 1e-13).value,
              theta_exact(g, ThetaQuery(0.4), 1e-13).value, 1e-12);
}

TEST(ThetaExact, BudgetExhaustionReportsPartialResult) {
  SeriesLimits limits;
  limits.max_terms = 50;
  try {
    theta_exact(GramForm(Matrix::Identity(4, 4)), ThetaQuery(0.01), 1e-10, limits);
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_GE(e.best_value(), 0.0);
  }
  limits = {};
  limits.max_radius = 1.0;
  EXPECT_THROW(theta_exact(GramForm(Matrix::Identity(2, 2)), ThetaQuery(0.01), 1e-10, limits),
               NumericalFailure);
}

TEST(ThetaExact, RejectsBadQueries) {
  EXPECT_THROW(ThetaQuery(0.0), InputError);
  EXPECT_THROW(ThetaQuery::from_nome(1.0), InputError);
  EXPECT_THROW(theta_exact(GramForm(Matrix::Identity(2, 2)), ThetaQuery(1.0), 0.0),
               InputError);
}

TEST(ThetaApprox, FrozenValueForZ2) {
  const auto p = approx_params(GramForm(Matrix::Identity(2, 2)));
  EXPECT_EQ(p.dimension, 2);
  EXPECT_DOUBLE_EQ(p.volume, 1.0);
  EXPECT_DOUBLE_EQ(p.minimal_norm, 1.0);
  // 1 + (1 + pi) e^{-pi}
  const double expected = 1.0 + (1.0 + kPi) * std::exp(-kPi);
  EXPECT_NEAR(theta_approx(p, 1.0).value, expected, 1e-14);
  EXPECT_NEAR(theta_approx(p, 1.0).value, 1.1789744464140690, 1e-14);
}

TEST(ThetaApprox, MatchesIntegralForm) {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (const char* name : {"Z2", "D4", "Lambda1", "Gamma2"}) {
    const auto p = approx_params(gram(catalog(name)));
    const double h = 0.5 * p.dimension;
    for (double tau : {0.05, 0.5, 2.0}) {
      const double a = kPi * tau * p.minimal_norm;
      // Substituting t = 1 + u keeps the integration range at [0, inf).
      const double integral = integrator.integrate(
          [&](double u) { return std::pow(1.0 + u, h) * std::exp(-a * (1.0 + u)); });
      const double expected = 1.0 + std::pow(kPi * p.minimal_norm, h + 1) * tau /
                                        (std::tgamma(h + 1) * p.volume) * integral;
      EXPECT_NEAR(theta_approx(p, tau).value, expected, 1e-9 * expected) << name << tau;
    }
  }
}

TEST(ThetaApprox, ConvergesToExactForSmallTau) {
  // As tau -> 0 both sides behave like 1 / (nu tau^{n/2}).
  const GramForm g = gram(catalog("D4"));
  const auto p = approx_params(g);
  const double exact = theta_exact(g, ThetaQuery(0.01), 1e-10).value;
  EXPECT_NEAR(theta_approx(p, 0.01).value / exact, 1.0, 0.05);
}

// Relative error of approx - 1 against exact - 1, both computed without
// the leading 1 so that large tau keeps its digits.
double excess_error(const GramForm& g, double tau) {
  const auto p = approx_params(g);
  const double tol = 1e-12 * std::exp(-kPi * tau * p.minimal_norm);
  const double exact =
      truncated_exponential_sum(ShortVectorEnumerator(g), kPi * tau, tol).value_without_origin;
  const double h = 0.5 * p.dimension;
  const double approx = boost::math::gamma_q(h + 1, kPi * tau * p.minimal_norm) /
                        (p.volume * std::pow(tau, h));
  if (tau < 5.0) {
    EXPECT_NEAR(theta_approx(p, tau).value - 1.0, approx, 1e-13);
  }
  return std::abs(approx - exact) / exact;
}

TEST(ThetaApprox, ExcessWithinAQuarterForZ2) {
  for (double tau = 0.5; tau <= 4.0; tau += 0.25)
    EXPECT_LE(excess_error(GramForm(Matrix::Identity(2, 2)), tau), 0.25) << tau;
}

// For large tau, Theta - 1 ~ kissing q^lambda while the main term gives
// (pi lambda)^{n/2} / (Gamma(n/2 + 1) nu) q^lambda, so the relative error of
// the excess tends to 1 - (pi lambda)^{n/2} / (Gamma(n/2 + 1) nu kissing).
TEST(ThetaApprox, ExcessErrorLimit) {
  struct Case {
    const char* name;
    double limit;
  };
  // Z2: 1 - pi / 4. D4: 1 - (2 pi)^2 / (2 * 2 * 24).
  for (const Case c : {Case{"Z2", 1.0 - kPi / 4.0}, Case{"D4", 1.0 - 4 * kPi * kPi / 96.0}}) {
    const GramForm g = gram(catalog(c.name));
    EXPECT_NEAR(excess_error(g, 40.0), c.limit, 0.01) << c.name;
  }
  // D4 therefore stays well above a quarter once tau >= 1.
  for (double tau = 1.0; tau <= 4.0; tau += 0.5)
    EXPECT_GT(excess_error(gram(catalog("D4")), tau), 0.25);
}

}  // namespace
}  // namespace wiretap
