#pragma once

#include "wiretap/lattice.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace wiretap {

using Coefficients = std::vector<std::int64_t>;

/// Unimodular change of basis T with reduced = T^t G T.
struct BasisReduction {
  IntMatrix transform;
  IntMatrix inverse;
  Matrix reduced;
};

/// LLT-based LLL reduction of a Gram form (delta = 0.99).
BasisReduction lll_reduce(const GramForm& gram);

/// Enumerates integer vectors z with (z - c)^t G (z - c) <= R.
///
/// The form is first LLL reduced, G' = T^t G T, and G' is written as
/// U^t D U with U unit upper triangular, so it splits into a sum of squares
/// whose last term depends on the last coordinate only. The search fixes
/// coordinates from last to first, bounding each one by the radius left over
/// from the coordinates already fixed. Visitors see coefficients in the
/// original basis.
class ShortVectorEnumerator {
 public:
  explicit ShortVectorEnumerator(const GramForm& gram);

  int rank() const noexcept { return rank_; }
  const GramForm& gram() const noexcept { return gram_; }
  /// Gram matrix in the reduced basis; its diagonal bounds the minimum.
  const Matrix& reduced_gram() const noexcept { return reduction_.reduced; }
  const BasisReduction& reduction() const noexcept { return reduction_; }

  /// Calls visit(std::span<const std::int64_t> z, double norm) for every z
  /// inside the ellipsoid, including z = round(center) if it qualifies.
  /// Points with norm up to radius * (1 + 1e-10) are included so exact ties
  /// on the boundary of integral forms are never lost. The visitor returns
  /// false to stop early; visit() then returns false as well.
  template <class Visitor>
  bool visit(double radius, std::span<const double> center,
             Visitor&& visitor) const {
    if (!(radius >= 0.0)) return true;
    const double bound = radius * (1.0 + kBoundarySlack);
    // Center in reduced coordinates, c' = T^{-1} c.
    std::vector<double> reduced_center(rank_, 0.0);
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j)
        reduced_center[i] += static_cast<double>(reduction_.inverse(i, j)) * center[j];
    std::vector<std::int64_t> z(rank_, 0);
    std::vector<std::int64_t> original(rank_, 0);
    std::vector<double> partial(rank_ + 1, 0.0);
    auto mapped = [&](std::span<const std::int64_t> w, double norm) {
      for (int i = 0; i < rank_; ++i) {
        std::int64_t v = 0;
        for (int j = 0; j < rank_; ++j) v += reduction_.transform(i, j) * w[j];
        original[i] = v;
      }
      return visitor(std::span<const std::int64_t>(original), norm);
    };
    return descend(rank_ - 1, bound, std::span<const double>(reduced_center), z, partial,
                   mapped);
  }

  template <class Visitor>
  bool visit(double radius, Visitor&& visitor) const {
    const std::vector<double> origin(rank_, 0.0);
    return visit(radius, std::span<const double>(origin),
                 std::forward<Visitor>(visitor));
  }

  static constexpr double kBoundarySlack = 1e-10;

 private:
  template <class Visitor>
  bool descend(int level, double bound, std::span<const double> center,
               std::vector<std::int64_t>& z, std::vector<double>& partial,
               Visitor& visitor) const {
    double offset = 0.0;
    for (int j = level + 1; j < rank_; ++j)
      offset += mu_[level * rank_ + j] * (static_cast<double>(z[j]) - center[j]);
    const double middle = center[level] - offset;
    const double remaining = bound - partial[level + 1];
    if (remaining < 0.0) return true;
    const double half_width = std::sqrt(remaining / pivots_[level]);
    const auto lo = static_cast<std::int64_t>(std::ceil(middle - half_width));
    const auto hi = static_cast<std::int64_t>(std::floor(middle + half_width));
    for (std::int64_t v = lo; v <= hi; ++v) {
      const double t = static_cast<double>(v) - middle;
      const double p = partial[level + 1] + pivots_[level] * t * t;
      if (p > bound) continue;
      z[level] = v;
      partial[level] = p;
      if (level == 0) {
        if (!visitor(std::span<const std::int64_t>(z), p)) return false;
      } else if (!descend(level - 1, bound, center, z, partial, visitor)) {
        return false;
      }
    }
    z[level] = 0;
    return true;
  }

  GramForm gram_;
  int rank_;
  BasisReduction reduction_;
  std::vector<double> pivots_;  // D
  std::vector<double> mu_;      // U, row-major, unit diagonal
};

struct ShortVector {
  Coefficients coefficients;
  double norm;
};

struct ShortVectorReport {
  std::vector<ShortVector> entries;
  double bound;
};

/// All nonzero z with z^t G z <= bound.
ShortVectorReport enumerate_short_vectors(const GramForm& gram, double bound);

struct MinimalNorm {
  double value;
  std::int64_t kissing;
};

/// Shortest nonzero norm and the number of vectors attaining it.
MinimalNorm minimal_norm(const GramForm& gram);

/// True when the minimal vectors span the whole coefficient space.
bool is_well_rounded(const GramForm& gram);

struct ClosestPoint {
  Vector point;
  IntVector coefficients;
  double distance_squared;
};

/// Lattice point nearest to target. Ties within 1e-12 relative are broken
/// towards the lexicographically smallest coefficient vector.
ClosestPoint closest_vector(const Lattice& lattice, const Vector& target);

/// Reusable closest-point solver for repeated queries on one lattice.
class ClosestPointSolver {
 public:
  explicit ClosestPointSolver(const Lattice& lattice);
  ClosestPoint solve(const Vector& target) const;

 private:
  Matrix basis_;
  ShortVectorEnumerator enumerator_;
  Eigen::LLT<Matrix> gram_llt_;
};

struct ThetaTerm {
  double norm;
  std::int64_t multiplicity;
};

struct ThetaCoefficients {
  std::vector<ThetaTerm> terms;
};

/// Multiplicities of the norms <= bound, starting with (0, 1). Norms closer
/// than 1e-9 are merged into one entry.
ThetaCoefficients theta_coefficients(const GramForm& gram, double bound);

/// Tolerance used when comparing enumerated norms for equality.
inline double norm_tolerance(double norm) {
  return 1e-9 * std::max(1.0, std::abs(norm));
}

}  // namespace wiretap
