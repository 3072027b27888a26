#pragma once

#include "wiretap/enumeration.hpp"
#include "wiretap/lattice.hpp"
#include "wiretap/smith_normal_form.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace wiretap {

/// Lambda_e (coarse) nested in Lambda_b (fine): fine.basis() * transition ==
/// coarse.basis().
class NestedPair {
 public:
  /// Throws InputError unless coarse is a full-rank sublattice of fine.
  NestedPair(Lattice fine, Lattice coarse);

  const Lattice& fine() const noexcept { return fine_; }
  const Lattice& coarse() const noexcept { return coarse_; }
  const IntMatrix& transition() const noexcept { return transition_; }
  std::int64_t index() const noexcept { return index_; }

 private:
  Lattice fine_;
  Lattice coarse_;
  IntMatrix transition_;
  std::int64_t index_;
};

struct Message {
  std::int64_t id;
};

/// Coset representatives of fine/coarse, one per message, each reduced into
/// the Voronoi cell of the coarse lattice.
///
/// Message ids are mixed-radix numbers over the Smith diagonal d of the
/// transition matrix X = U^{-1} D V^{-1}: digit i (least significant first)
/// is the i-th entry of U w mod d_i, where w are the fine-lattice coordinates
/// of a point.
class CosetCode {
 public:
  explicit CosetCode(NestedPair pair);

  const NestedPair& pair() const noexcept { return pair_; }
  std::int64_t size() const noexcept { return pair_.index(); }
  const SmithForm& smith() const noexcept { return smith_; }

  /// lambda_M for message m.
  const Vector& representative(Message m) const;
  /// Fine-lattice coordinates of lambda_M.
  const IntVector& representative_coefficients(Message m) const;
  const std::vector<Vector>& representatives() const noexcept { return points_; }

  /// Message whose coset contains the fine-lattice point with coordinates w.
  Message coset_of(const IntVector& fine_coefficients) const;

 private:
  void check(Message m) const;

  NestedPair pair_;
  SmithForm smith_;
  std::vector<Vector> points_;
  std::vector<IntVector> coefficients_;
};

/// Builds the representatives (Smith decomposition, then Voronoi reduction
/// against the coarse lattice with the closest-point tie rule).
CosetCode coset_representatives(const NestedPair& pair);

using RandomStream = std::mt19937_64;

struct ShapingParams {
  double sigma_s;
};

/// One entry of a discrete Gaussian table.
struct GaussianTableEntry {
  Vector point;
  double probability;
};

/// Exact-table sampler for D_{Lambda_e + lambda_M, sigma_s}. Each message's
/// table holds every point of its coset within the radius that captures all
/// but 2^-40 of the mass.
class DiscreteGaussianEncoder {
 public:
  DiscreteGaussianEncoder(const CosetCode& code, ShapingParams shaping,
                          std::size_t max_table_size = 4'000'000);

  Vector encode(Message m, RandomStream& rng) const;
  std::vector<GaussianTableEntry> table(Message m) const;
  double sigma_s() const noexcept { return sigma_s_; }

 private:
  struct Table {
    std::vector<Vector> points;
    std::vector<double> cumulative;
  };

  double sigma_s_;
  std::vector<Table> tables_;
};

/// Uniform choice among the representatives of coarse/shaping added to
/// lambda_M.
class ModShapingEncoder {
 public:
  /// Throws InputError unless shaping is nested in the coarse lattice.
  ModShapingEncoder(const CosetCode& code, const Lattice& shaping);

  Vector encode(Message m, RandomStream& rng) const;
  /// |Lambda_e / Lambda_s|
  std::int64_t randomization_size() const noexcept { return shaping_code_.size(); }
  const CosetCode& shaping_code() const noexcept { return shaping_code_; }

 private:
  CosetCode code_;
  CosetCode shaping_code_;
};

Vector encode_gaussian(const CosetCode& code, Message m, ShapingParams shaping,
                       RandomStream& rng);
Vector encode_mod_lambda_s(const CosetCode& code, const Lattice& shaping, Message m,
                           RandomStream& rng);

}  // namespace wiretap
