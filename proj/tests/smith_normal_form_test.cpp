#include "wiretap/smith_normal_form.hpp"

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "wiretap/errors.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace wiretap {
namespace {

void expect_valid(const IntMatrix& a, const SmithForm& s) {
  const int n = static_cast<int>(a.rows());
  IntMatrix d = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = s.diagonal[i];
  EXPECT_EQ(s.left * a * s.right, d);
  EXPECT_EQ(s.left * s.left_inverse, IntMatrix::Identity(n, n));
  EXPECT_NEAR(std::abs(s.right.cast<double>().determinant()), 1.0, 1e-6);
  std::int64_t product = 1;
  for (int i = 0; i < n; ++i) {
    EXPECT_GT(s.diagonal[i], 0);
    if (i + 1 < n) {
      EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
    }
    product *= s.diagonal[i];
  }
  EXPECT_EQ(product, std::llround(std::abs(a.cast<double>().determinant())));
}

TEST(SmithNormalForm, KnownDiagonals) {
  IntMatrix a(2, 2);
  a << 4, 0, 0, 4;
  EXPECT_EQ(smith_normal_form(a).diagonal, (IntVector(2) << 4, 4).finished());
  a << 1, 0, 0, 16;
  EXPECT_EQ(smith_normal_form(a).diagonal, (IntVector(2) << 1, 16).finished());
  // diag(2, 3) ~ diag(1, 6)
  a << 2, 0, 0, 3;
  EXPECT_EQ(smith_normal_form(a).diagonal, (IntVector(2) << 1, 6).finished());
}

TEST(SmithNormalForm, CatalogTransitions) {
  for (const char* name : {"Pi1", "Pi2", "Omega1", "Omega3", "Gamma1", "Gamma2"}) {
    const IntMatrix a = catalog_basis(name);
    expect_valid(a, smith_normal_form(a));
  }
}

TEST(SmithNormalForm, RandomMatrices) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix a = testing::random_nonsingular(rng, 1 + trial % 5, 6);
    expect_valid(a, smith_normal_form(a));
  }
}

TEST(SmithNormalForm, RejectsSingularAndNonSquare) {
  IntMatrix a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_THROW(smith_normal_form(a), InputError);
  EXPECT_THROW(smith_normal_form(IntMatrix(2, 3)), InputError);
}

}  // namespace
}  // namespace wiretap
