#pragma once

#include "wiretap/lattice.hpp"
#include "wiretap/theta.hpp"

#include <span>

namespace wiretap {

/// Noise standard deviation per real dimension.
class SigmaParam {
 public:
  explicit SigmaParam(double sigma);
  static SigmaParam from_tau(double tau);

  double sigma() const noexcept { return sigma_; }
  /// tau = 1 / (2 pi sigma^2)
  double tau() const noexcept;

 private:
  double sigma_;
};

enum class Representation { primal, dual };

struct FlatnessValue {
  double epsilon;
  double truncation_bound;
  Representation representation;
  /// Set when a slightly negative value (within the truncation slack) was
  /// clamped to zero.
  bool clamped = false;
};

/// 2 pi^2 sigma^2, the exponent per unit norm of the dual theta series.
double dual_decay(SigmaParam sigma);

/// Lattice Gaussian sum sum_z g(M(z + shift); sigma) in rank(G) dimensions,
/// with shift given in coefficient coordinates. tol bounds the truncation
/// error of the sum.
double gaussian_sum(const GramForm& gram, SigmaParam sigma,
                    std::span<const double> shift, double tol,
                    const SeriesLimits& limits = {});

/// nu * g(Lambda; sigma) - 1, evaluated on G.
FlatnessValue flatness_primal(const GramForm& gram, double volume, SigmaParam sigma,
                              double tol, const SeriesLimits& limits = {});

/// Theta_{Lambda*}(exp(-2 pi^2 sigma^2)) - 1, evaluated on G^{-1}. This is
/// the Poisson dual of flatness_primal for Theta(q) = sum q^{|x|^2}.
FlatnessValue flatness_dual(const GramForm& gram, SigmaParam sigma, double tol,
                            const SeriesLimits& limits = {});

/// Flatness factor from a Gram form, choosing whichever representation has
/// the faster-decaying leading term. volume must equal sqrt(det G) to 1e-8
/// relative. tol is an absolute tolerance on epsilon.
FlatnessValue flatness_from_gram(const GramForm& gram, double volume, SigmaParam sigma,
                                 double tol, const SeriesLimits& limits = {});

FlatnessValue flatness_factor(const Lattice& lattice, SigmaParam sigma, double tol,
                              const SeriesLimits& limits = {});

/// Which representation flatness_from_gram would use, from the minimal norms
/// of the form and of its inverse.
Representation choose_representation(double primal_minimum, double dual_minimum,
                                     SigmaParam sigma);

}  // namespace wiretap
