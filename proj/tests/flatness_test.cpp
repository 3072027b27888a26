#include "wiretap/flatness.hpp"

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "wiretap/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace wiretap {
namespace {

constexpr double kPi = std::numbers::pi;

// For Z^n: epsilon(sigma) = theta3(exp(-2 pi^2 sigma^2))^n - 1.
double integer_lattice_flatness(int n, double sigma) {
  return std::pow(jacobi_theta3(std::exp(-2.0 * kPi * kPi * sigma * sigma)), n) - 1.0;
}

TEST(Flatness, IntegerLatticeClosedForm) {
  for (int n : {1, 2, 4}) {
    for (double sigma : {0.1, 0.2, 0.3, 0.5, 1.0}) {
      const auto v = flatness_factor(catalog("Z" + std::to_string(n)), SigmaParam(sigma), 1e-12);
      const double expected = integer_lattice_flatness(n, sigma);
      EXPECT_NEAR(v.epsilon, expected, 1e-11 + 1e-10 * expected) << n << ' ' << sigma;
    }
  }
}

TEST(Flatness, FrozenValues) {
  // sigma = 1 / sqrt(2 pi): primal side is Theta_{Z^2}(e^{-pi}) - 1.
  const double sigma = 1.0 / std::sqrt(2.0 * kPi);
  EXPECT_NEAR(flatness_factor(catalog("Z2"), SigmaParam(sigma), 1e-13).epsilon,
              0.1803405990160962, 1e-12);
  EXPECT_DOUBLE_EQ(dual_decay(SigmaParam(1.0)), 2.0 * kPi * kPi);
}

TEST(Flatness, PrimalAndDualAgree) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 3;
    const Lattice l = testing::random_integer_lattice(rng, n, 3);
    const GramForm g = gram(l);
    const double nu = volume(l);
    const double scale = std::pow(nu, 1.0 / n);
    for (double r : {0.15, 0.3, 0.6}) {
      const SigmaParam sigma(r * scale);
      const auto p = flatness_primal(g, nu, sigma, 1e-12);
      const auto d = flatness_dual(g, sigma, 1e-12);
      EXPECT_NEAR(p.epsilon, d.epsilon, 1e-9 + 1e-8 * d.epsilon) << trial << ' ' << r;
    }
  }
}

TEST(Flatness, ScaleInvariance) {
  const Lattice l = catalog("Omega3");
  for (double c : {0.5, 3.0}) {
    const double a = flatness_factor(l, SigmaParam(2.0), 1e-12).epsilon;
    const double b = flatness_factor(scaled(l, c), SigmaParam(2.0 * c), 1e-12).epsilon;
    EXPECT_NEAR(a, b, 1e-10 + 1e-9 * a);
  }
}

TEST(Flatness, DecreasesWithSigma) {
  for (const char* name : {"Lambda1", "Lambda2", "Pi2", "Gamma1"}) {
    const Lattice l = catalog(name);
    double previous = INFINITY;
    for (double sigma = 0.5; sigma < 12.0; sigma *= 1.3) {
      const double e = flatness_factor(l, SigmaParam(sigma), 1e-10).epsilon;
      EXPECT_LE(e, previous * (1 + 1e-9) + 1e-10) << name << ' ' << sigma;
      EXPECT_GE(e, 0.0);
      previous = e;
    }
  }
}

TEST(Flatness, SupremumIsAttainedAtLatticePoints) {
  // |nu f(x) - 1| <= epsilon with equality at x in the lattice.
  const Lattice l = catalog("D4");
  const GramForm g = gram(l);
  const SigmaParam sigma(0.5);
  const double eps = flatness_factor(l, sigma, 1e-13).epsilon;
  const double nu = volume(l);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> shift(4);
    for (auto& s : shift) s = unit(rng);
    const double f = nu * gaussian_sum(g, sigma, shift, 1e-13);
    EXPECT_LE(std::abs(f - 1.0), eps + 1e-11);
  }
  const std::vector<double> origin(4, 0.0), lattice_point{1.0, -2.0, 0.0, 3.0};
  EXPECT_NEAR(nu * gaussian_sum(g, sigma, origin, 1e-13) - 1.0, eps, 1e-11);
  EXPECT_NEAR(nu * gaussian_sum(g, sigma, lattice_point, 1e-13) - 1.0, eps, 1e-11);
}

TEST(Flatness, RepresentationChoice) {
  // Small sigma: primal terms decay fast. Large sigma: dual terms do.
  EXPECT_EQ(choose_representation(1.0, 1.0, SigmaParam(0.05)), Representation::primal);
  EXPECT_EQ(choose_representation(1.0, 1.0, SigmaParam(5.0)), Representation::dual);
  EXPECT_EQ(flatness_factor(catalog("Z2"), SigmaParam(0.05), 1e-10).representation,
            Representation::primal);
}

TEST(Flatness, RejectsBadArguments) {
  EXPECT_THROW(SigmaParam(0.0), InputError);
  EXPECT_THROW(SigmaParam::from_tau(-1.0), InputError);
  EXPECT_THROW(flatness_factor(catalog("Z2"), SigmaParam(1.0), 0.0), InputError);
  EXPECT_THROW(flatness_from_gram(GramForm(Matrix::Identity(2, 2)), 2.0, SigmaParam(1.0), 1e-8),
               InputError);
  Matrix m(3, 2);
  m << 1, 0, 0, 1, 0, 0;
  EXPECT_THROW(flatness_factor(Lattice(m), SigmaParam(1.0), 1e-8), InputError);
}

TEST(SigmaParam, TauRoundTrip) {
  EXPECT_NEAR(SigmaParam::from_tau(0.37).tau(), 0.37, 1e-15);
}

}  // namespace
}  // namespace wiretap
