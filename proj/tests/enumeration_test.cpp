#include "wiretap/enumeration.hpp"

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "wiretap/errors.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace wiretap {
namespace {

// Every z in the box [-k, k]^n with z^t G z <= bound, z != 0.
std::vector<Coefficients> brute_force(const GramForm& g, double bound, int k) {
  const int n = g.rank();
  std::vector<Coefficients> out;
  Coefficients z(n, -k);
  while (true) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = static_cast<double>(z[i]);
    const bool zero = std::all_of(z.begin(), z.end(), [](auto x) { return x == 0; });
    if (!zero && g.norm(v) <= bound * (1 + 1e-10)) out.push_back(z);
    int i = 0;
    while (i < n && z[i] == k) z[i++] = -k;
    if (i == n) break;
    ++z[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Coefficients> sorted(const ShortVectorReport& r) {
  std::vector<Coefficients> out;
  for (const auto& e : r.entries) out.push_back(e.coefficients);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Enumeration, MatchesBruteForceOnZ2) {
  const GramForm g(Matrix::Identity(2, 2));
  EXPECT_EQ(sorted(enumerate_short_vectors(g, 5.0)), brute_force(g, 5.0, 3));
  EXPECT_EQ(enumerate_short_vectors(g, 1.0).entries.size(), 4u);
  EXPECT_EQ(enumerate_short_vectors(g, 2.0).entries.size(), 8u);
}

TEST(Enumeration, MatchesBruteForceOnRandomForms) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    const Lattice l = testing::random_integer_lattice(rng, n, 3);
    const GramForm g = gram(l);
    const double bound = 2.0 * g.matrix().diagonal().maxCoeff();
    // Coefficients within the bound satisfy |z_i| <= sqrt(bound * (G^-1)_ii).
    const Matrix inv = g.inverse().matrix();
    int k = 0;
    for (int i = 0; i < n; ++i)
      k = std::max(k, static_cast<int>(std::ceil(std::sqrt(bound * inv(i, i)))));
    // Keep the brute-force box small.
    if (std::pow(2 * k + 1, n) > 2e5) continue;
    ++checked;
    EXPECT_EQ(sorted(enumerate_short_vectors(g, bound)), brute_force(g, bound, k));
  }
  EXPECT_GE(checked, 30);
}

TEST(Enumeration, ReportedNormsAreExact) {
  const GramForm g = gram(catalog("Gamma2"));
  for (const auto& e : enumerate_short_vectors(g, 40.0).entries) {
    Vector v(4);
    for (int i = 0; i < 4; ++i) v[i] = static_cast<double>(e.coefficients[i]);
    EXPECT_NEAR(e.norm, g.norm(v), 1e-9);
  }
}

TEST(Enumeration, VisitorCanStopEarly) {
  const ShortVectorEnumerator e(GramForm(Matrix::Identity(3, 3)));
  int seen = 0;
  const bool finished = e.visit(10.0, [&](std::span<const std::int64_t>, double) {
    return ++seen < 5;
  });
  EXPECT_FALSE(finished);
  EXPECT_EQ(seen, 5);
}

TEST(Enumeration, CenteredSearch) {
  const ShortVectorEnumerator e(GramForm(Matrix::Identity(2, 2)));
  const std::vector<double> center{0.5, 0.5};
  int count = 0;
  e.visit(0.5, std::span<const double>(center),
          [&](std::span<const std::int64_t>, double norm) {
            EXPECT_NEAR(norm, 0.5, 1e-12);
            ++count;
            return true;
          });
  EXPECT_EQ(count, 4);
}

TEST(MinimalNorm, ThetaSeriesCoefficientsOfKnownLattices) {
  // Z^4: r_4(1) = 8, D4: 24 roots.
  EXPECT_EQ(minimal_norm(GramForm(Matrix::Identity(4, 4))).kissing, 8);
  const auto d4 = minimal_norm(gram(catalog("D4")));
  EXPECT_EQ(d4.value, 2.0);
  EXPECT_EQ(d4.kissing, 24);
  // Hexagonal lattice: norm 1, kissing 6.
  Matrix hex(2, 2);
  hex << 1, 0.5, 0.5, 1;
  EXPECT_EQ(minimal_norm(GramForm(hex)).kissing, 6);
}

TEST(MinimalNorm, WellRounded) {
  EXPECT_TRUE(is_well_rounded(gram(catalog("Omega3"))));
  EXPECT_FALSE(is_well_rounded(gram(catalog("Omega1"))));
  Matrix g(2, 2);
  g << 1, 0, 0, 1.0001;
  EXPECT_FALSE(is_well_rounded(GramForm(g)));
}

TEST(Reduction, IsUnimodularAndConsistent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const IntMatrix m = testing::random_nonsingular(rng, n, 3) *
                        testing::random_unimodular(rng, n, 10);
    const GramForm g = gram(Lattice(m.cast<double>()));
    const auto r = lll_reduce(g);
    EXPECT_EQ(r.transform * r.inverse, IntMatrix::Identity(n, n));
    const Matrix t = r.transform.cast<double>();
    EXPECT_TRUE((t.transpose() * g.matrix() * t).isApprox(r.reduced, 1e-12));
    // LLL guarantee on the first vector for delta = 0.99.
    const double factor = std::pow(1.0 / (0.99 - 0.25), n - 1);
    EXPECT_LE(r.reduced(0, 0), factor * minimal_norm(g).value + 1e-9);
  }
}

TEST(Reduction, HandlesSkewedForms) {
  Matrix b(2, 2);
  b << 1, 1000, 0, 1e-3;
  // (1000, 1e-3) - 1000 (1, 0) is the shortest vector.
  const auto m = minimal_norm(gram(Lattice(b)));
  // The Gram entries are ~1e6, so the norm carries ~1e-10 absolute error.
  EXPECT_NEAR(m.value, 1e-6, 1e-10);
  EXPECT_EQ(m.kissing, 2);
}

// Brute force nearest point over a box around the least-squares solution.
IntVector brute_closest(const Lattice& l, const Vector& target) {
  const int n = l.rank();
  const Vector c = l.basis().colPivHouseholderQr().solve(target);
  IntVector best(n), z(n);
  double best_d = 1e300;
  const int k = 3;
  std::vector<int> offset(n, -k);
  while (true) {
    for (int i = 0; i < n; ++i) z[i] = std::llround(c[i]) + offset[i];
    const double d = (l.point(z) - target).squaredNorm();
    if (d < best_d - 1e-12) {
      best_d = d;
      best = z;
    }
    int i = 0;
    while (i < n && offset[i] == k) offset[i++] = -k;
    if (i == n) break;
    ++offset[i];
  }
  return best;
}

TEST(ClosestVector, MatchesBruteForce) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 3.0);
  const Lattice l = catalog("D4");
  const ClosestPointSolver solver(l);
  for (int trial = 0; trial < 200; ++trial) {
    Vector t(4);
    for (int i = 0; i < 4; ++i) t[i] = normal(rng);
    const auto cp = solver.solve(t);
    const IntVector expected = brute_closest(l, t);
    EXPECT_NEAR(cp.distance_squared, (l.point(expected) - t).squaredNorm(), 1e-9);
    EXPECT_TRUE(cp.point.isApprox(l.point(cp.coefficients)));
  }
}

TEST(ClosestVector, TiesGoToSmallestCoefficients) {
  const Lattice l = catalog("Z2");
  const auto cp = closest_vector(l, Vector::Constant(2, 0.5));
  EXPECT_EQ(cp.coefficients, (IntVector(2) << 0, 0).finished());
  EXPECT_NEAR(cp.distance_squared, 0.5, 1e-12);
}

TEST(ClosestVector, NonFullLatticeAddsOrthogonalPart) {
  Matrix b(3, 1);
  b << 1, 0, 0;
  const auto cp = closest_vector(Lattice(b), (Vector(3) << 2.2, 1, 0).finished());
  EXPECT_EQ(cp.coefficients[0], 2);
  EXPECT_NEAR(cp.distance_squared, 0.04 + 1.0, 1e-12);
}

TEST(ThetaCoefficients, MatchSumsOfSquares) {
  // r_2(k) for k = 0..5: 1, 4, 4, 0, 4, 8.
  const auto c = theta_coefficients(GramForm(Matrix::Identity(2, 2)), 5.0);
  std::map<int, std::int64_t> got;
  for (const auto& t : c.terms) got[static_cast<int>(std::lround(t.norm))] = t.multiplicity;
  EXPECT_EQ(got[1], 4);
  EXPECT_EQ(got[2], 4);
  EXPECT_EQ(got.count(3), 0u);
  EXPECT_EQ(got[4], 4);
  EXPECT_EQ(got[5], 8);
}

}  // namespace
}  // namespace wiretap
