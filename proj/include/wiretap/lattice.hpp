#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wiretap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// A lattice in R^n given by an n x s generator matrix. Columns are the basis
/// vectors, so lattice points are basis() * z for integer z.
class Lattice {
 public:
  /// Throws InputError unless the columns are finite and linearly independent.
  explicit Lattice(Matrix basis);

  const Matrix& basis() const noexcept { return basis_; }
  int dimension() const noexcept { return static_cast<int>(basis_.rows()); }
  int rank() const noexcept { return static_cast<int>(basis_.cols()); }
  bool is_full() const noexcept { return dimension() == rank(); }

  Vector point(const IntVector& coefficients) const;

 private:
  Matrix basis_;
};

/// Symmetric positive-definite quadratic form z -> z^t G z.
class GramForm {
 public:
  /// Symmetrizes and throws InputError unless G is symmetric to 1e-12
  /// relative and strictly positive definite.
  explicit GramForm(Matrix gram);

  const Matrix& matrix() const noexcept { return gram_; }
  int rank() const noexcept { return static_cast<int>(gram_.rows()); }
  double determinant() const;
  /// sqrt(det G), the covolume of any lattice with this Gram matrix.
  double volume() const { return std::sqrt(determinant()); }
  double norm(const Vector& coefficients) const;

  /// Gram matrix of the dual lattice, G^{-1}.
  GramForm inverse() const;
  GramForm scaled(double factor) const;

 private:
  Matrix gram_;
};

GramForm gram(const Lattice& lattice);

/// |det M| for full lattices, det(M^t M)^{1/2} otherwise.
double volume(const Lattice& lattice);

/// Lattice generated by (M^{-1})^t. Requires a full lattice.
Lattice dual(const Lattice& lattice);

Lattice scaled(const Lattice& lattice, double factor);

struct SublatticeIndex {
  std::int64_t index;
  /// Integer matrix X with super.basis() * X == sub.basis().
  IntMatrix transition;
};

/// Index |super / sub|. Throws InputError when sub is not contained in super
/// (the transition matrix is not integral to within 1e-9).
SublatticeIndex index_of_sublattice(const Lattice& sub, const Lattice& super);

/// Lattice generated by h * M. Throws InputError if h has the wrong shape or
/// the product loses rank.
Lattice apply_fading(const Lattice& lattice, const Matrix& h);

/// Integer generator matrix of a named test lattice. Accepted names: Z<n>
/// (for any n >= 1), D4, Lambda1, Lambda2, Pi1, Pi2, Omega1, Omega2, Omega3,
/// Gamma1, Gamma2.
IntMatrix catalog_basis(std::string_view name);
Lattice catalog(std::string_view name);

/// Fixed catalog entries, in the order used for listing.
const std::vector<std::string>& catalog_names();

/// Reads the plain-text format: first line "n s", then n rows of s reals.
Lattice read_lattice_file(const std::filesystem::path& path);
Lattice parse_lattice_text(std::string_view text);
std::string format_lattice_text(const Lattice& lattice);

/// Catalog name if it is one, otherwise a file path.
Lattice load_lattice(std::string_view name_or_path);

struct LatticeSummary {
  double minimal_norm;
  std::int64_t kissing;
  bool well_rounded;
  double volume;
  std::optional<std::int64_t> index;
};

LatticeSummary summarize(const Lattice& lattice);
LatticeSummary summarize(const Lattice& lattice, const Lattice& ambient);

}  // namespace wiretap
