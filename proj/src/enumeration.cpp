#include "wiretap/enumeration.hpp"

#include "wiretap/errors.hpp"

#include <algorithm>
#include <limits>

namespace wiretap {

namespace {

constexpr double kLovasz = 0.99;
constexpr int kMaxSwaps = 1'000'000;

// Gram-Schmidt coefficients mu(i, j), j < i, and squared lengths b(i).
void orthogonalize(const Matrix& g, Matrix& mu, Vector& b) {
  const auto n = g.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      double v = g(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= mu(j, k) * mu(i, k) * b(k);
      mu(i, j) = v / b(j);
    }
    double v = g(i, i);
    for (Eigen::Index k = 0; k < i; ++k) v -= mu(i, k) * mu(i, k) * b(k);
    b(i) = v;
  }
}

}  // namespace

BasisReduction lll_reduce(const GramForm& gram) {
  const auto n = static_cast<Eigen::Index>(gram.rank());
  Matrix g = gram.matrix();
  IntMatrix t = IntMatrix::Identity(n, n);
  IntMatrix t_inv = IntMatrix::Identity(n, n);
  Matrix mu = Matrix::Zero(n, n);
  Vector b(n);
  Eigen::Index k = 1;
  int swaps = 0;
  while (k < n && swaps < kMaxSwaps) {
    orthogonalize(g, mu, b);
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const double r = std::round(mu(k, j));
      if (r == 0.0) continue;
      // Column k -= r * column j.
      g.col(k) -= r * g.col(j);
      g.row(k) -= r * g.row(j);
      const auto ri = static_cast<std::int64_t>(r);
      t.col(k) -= ri * t.col(j);
      t_inv.row(j) += ri * t_inv.row(k);
      for (Eigen::Index i = 0; i < j; ++i) mu(k, i) -= r * mu(j, i);
      mu(k, j) -= r;
    }
    orthogonalize(g, mu, b);
    if (b(k) < (kLovasz - mu(k, k - 1) * mu(k, k - 1)) * b(k - 1)) {
      g.row(k).swap(g.row(k - 1));
      g.col(k).swap(g.col(k - 1));
      t.col(k).swap(t.col(k - 1));
      t_inv.row(k).swap(t_inv.row(k - 1));
      k = std::max<Eigen::Index>(k - 1, 1);
      ++swaps;
    } else {
      ++k;
    }
  }
  // Recompute from the input so rounding in the updates does not accumulate.
  const Matrix tf = t.cast<double>();
  Matrix reduced = tf.transpose() * gram.matrix() * tf;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  return {std::move(t), std::move(t_inv), std::move(reduced)};
}

ShortVectorEnumerator::ShortVectorEnumerator(const GramForm& gram)
    : gram_(gram),
      rank_(gram.rank()),
      reduction_(lll_reduce(gram)),
      pivots_(rank_),
      mu_(rank_ * rank_, 0.0) {
  // G' = R^t R with R upper triangular; D = diag(R)^2, U = diag(R)^{-1} R.
  Eigen::LLT<Matrix> llt(reduction_.reduced);
  if (llt.info() != Eigen::Success)
    throw InputError("triangular decomposition failed: Gram matrix is not positive definite");
  const Matrix r = llt.matrixU();
  for (int i = 0; i < rank_; ++i) {
    const double rii = r(i, i);
    if (!(rii > 0.0))
      throw InputError("triangular decomposition failed: non-positive pivot");
    pivots_[i] = rii * rii;
    for (int j = i; j < rank_; ++j) mu_[i * rank_ + j] = r(i, j) / rii;
  }
}

ShortVectorReport enumerate_short_vectors(const GramForm& gram, double bound) {
  if (!(bound > 0.0)) throw InputError("enumeration radius must be positive");
  ShortVectorEnumerator enumerator(gram);
  ShortVectorReport report{{}, bound};
  enumerator.visit(bound, [&](std::span<const std::int64_t> z, double norm) {
    if (std::all_of(z.begin(), z.end(), [](std::int64_t v) { return v == 0; }))
      return true;
    report.entries.push_back({Coefficients(z.begin(), z.end()), norm});
    return true;
  });
  return report;
}

namespace {

std::vector<Coefficients> minimal_vectors(const GramForm& gram, double& minimum) {
  // The shortest reduced basis vector bounds the minimum from above, so
  // this radius always contains every minimal vector.
  const ShortVectorEnumerator enumerator(gram);
  const double radius = enumerator.reduced_gram().diagonal().minCoeff();
  std::vector<ShortVector> entries;
  enumerator.visit(radius, [&](std::span<const std::int64_t> z, double norm) {
    if (std::any_of(z.begin(), z.end(), [](std::int64_t v) { return v != 0; }))
      entries.push_back({Coefficients(z.begin(), z.end()), norm});
    return true;
  });
  minimum = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) minimum = std::min(minimum, e.norm);
  std::vector<Coefficients> result;
  for (const auto& e : entries) {
    if (e.norm - minimum <= norm_tolerance(minimum)) result.push_back(e.coefficients);
  }
  return result;
}

}  // namespace

MinimalNorm minimal_norm(const GramForm& gram) {
  double minimum = 0.0;
  const auto vectors = minimal_vectors(gram, minimum);
  Vector z(gram.rank());
  // Report the norm evaluated directly from G rather than the enumeration's
  // running sum, which is exact for integral forms.
  for (int i = 0; i < gram.rank(); ++i) z[i] = static_cast<double>(vectors.front()[i]);
  return {gram.norm(z), static_cast<std::int64_t>(vectors.size())};
}

bool is_well_rounded(const GramForm& gram) {
  double minimum = 0.0;
  const auto vectors = minimal_vectors(gram, minimum);
  Matrix stacked(static_cast<Eigen::Index>(vectors.size()), gram.rank());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (int j = 0; j < gram.rank(); ++j)
      stacked(static_cast<Eigen::Index>(i), j) = static_cast<double>(vectors[i][j]);
  Eigen::FullPivLU<Matrix> lu(stacked);
  lu.setThreshold(1e-9);
  return lu.rank() == gram.rank();
}

ClosestPointSolver::ClosestPointSolver(const Lattice& lattice)
    : basis_(lattice.basis()),
      enumerator_(gram(lattice)),
      gram_llt_(enumerator_.gram().matrix()) {}

ClosestPoint ClosestPointSolver::solve(const Vector& target) const {
  if (target.size() != basis_.rows())
    throw InputError("target dimension does not match the lattice");
  const int s = enumerator_.rank();
  // Least-squares coefficients c; the distance splits as
  // (z - c)^t G (z - c) + |component of target orthogonal to the lattice|^2.
  const Vector c = gram_llt_.solve(basis_.transpose() * target);
  std::vector<double> center(c.data(), c.data() + s);

  // Start from rounding in the reduced basis, T round(T^{-1} c).
  const auto& reduction = enumerator_.reduction();
  const Vector reduced_c = reduction.inverse.cast<double>() * c;
  IntVector rounded(s);
  for (int i = 0; i < s; ++i) rounded[i] = static_cast<std::int64_t>(std::llround(reduced_c[i]));
  IntVector best = reduction.transform * rounded;
  double best_norm = enumerator_.gram().norm(best.cast<double>() - c);

  const double radius = best_norm;
  enumerator_.visit(radius, std::span<const double>(center),
                    [&](std::span<const std::int64_t> z, double) {
                      Vector diff(s);
                      for (int i = 0; i < s; ++i) diff[i] = static_cast<double>(z[i]) - c[i];
                      const double norm = enumerator_.gram().norm(diff);
                      const double tie = 1e-12 * std::max(1.0, best_norm);
                      bool take = false;
                      if (norm < best_norm - tie) {
                        take = true;
                      } else if (norm <= best_norm + tie) {
                        take = std::lexicographical_compare(z.begin(), z.end(), best.data(),
                                                            best.data() + s);
                      }
                      if (take) {
                        best_norm = std::min(norm, best_norm);
                        for (int i = 0; i < s; ++i) best[i] = z[i];
                      }
                      return true;
                    });

  ClosestPoint result;
  result.coefficients = best;
  result.point = basis_ * best.cast<double>();
  result.distance_squared = (result.point - target).squaredNorm();
  return result;
}

ClosestPoint closest_vector(const Lattice& lattice, const Vector& target) {
  return ClosestPointSolver(lattice).solve(target);
}

ThetaCoefficients theta_coefficients(const GramForm& gram, double bound) {
  if (!(bound > 0.0)) throw InputError("enumeration radius must be positive");
  std::vector<double> norms;
  ShortVectorEnumerator(gram).visit(bound, [&](std::span<const std::int64_t>, double norm) {
    norms.push_back(norm);
    return true;
  });
  std::sort(norms.begin(), norms.end());
  ThetaCoefficients result;
  for (double norm : norms) {
    if (norm > bound * (1.0 + ShortVectorEnumerator::kBoundarySlack)) break;
    if (!result.terms.empty() && norm - result.terms.back().norm <= norm_tolerance(norm)) {
      ++result.terms.back().multiplicity;
    } else {
      result.terms.push_back({norm, 1});
    }
  }
  // The origin is visited with norm exactly 0.
  if (!result.terms.empty()) result.terms.front().norm = 0.0;
  return result;
}

}  // namespace wiretap
