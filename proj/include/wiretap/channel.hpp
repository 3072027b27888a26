#pragma once

#include "wiretap/coset_code.hpp"
#include "wiretap/flatness.hpp"
#include "wiretap/lattice.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace wiretap {

struct DeterministicFading {
  Matrix h;
};

/// diag(h_1..h_n), h_i independent Rayleigh with E[h_i^2] = scale^2.
struct RayleighDiagonalFading {
  int n;
  double scale = 1.0;
};

/// m x n matrix of independent N(0, entry_std^2) entries.
struct GaussianMimoFading {
  int m;
  int n;
  double entry_std = 1.0;
};

class FadingModel {
 public:
  using Variant = std::variant<DeterministicFading, RayleighDiagonalFading, GaussianMimoFading>;

  /// Throws InputError for non-positive scales or a rank-deficient h.
  explicit FadingModel(Variant model);

  const Variant& variant() const noexcept { return model_; }
  int input_dimension() const;
  int output_dimension() const;
  /// Typical entry magnitude, used to judge rank deficiency.
  double scale() const;

 private:
  Variant model_;
};

/// Independent substream for one trial, a function of (seed, trial) only.
RandomStream trial_stream(std::uint64_t seed, std::uint64_t trial);

/// One fading realization. Never resamples; see sample_full_rank_fading.
Matrix sample_fading(const FadingModel& model, RandomStream& rng);

/// Draws until sqrt(det(h^t h)) exceeds 1e-12 * scale^n and reports how many
/// draws were rejected.
Matrix sample_full_rank_fading(const FadingModel& model, RandomStream& rng,
                               std::int64_t& rejected);

struct MCEstimate {
  double mean;
  double std_error;
  std::int64_t trials;
  std::uint64_t seed;
  std::int64_t resampled_fades = 0;
  std::int64_t clamped_trials = 0;
};

/// exact: truncated theta series. prop1: the volume/minimal-norm main term
/// of Theta(exp(-pi tau)) substituted into nu tau^{n/2} Theta - 1.
enum class FlatnessEstimator { exact, prop1 };

struct MonteCarloOptions {
  std::int64_t trials = 10'000;
  std::uint64_t seed = 42;
  /// Worker threads; results do not depend on this.
  int workers = 1;
  /// Absolute tolerance on each per-trial flatness factor.
  double tol = 1e-8;
  FlatnessEstimator estimator = FlatnessEstimator::exact;
  SeriesLimits limits{};
};

/// Mean and standard error of per-trial values, summed in trial order.
MCEstimate summarize_trials(const std::vector<double>& values, std::uint64_t seed);

/// E_H[eps_{Lambda h}(sigma)] over independent fades.
MCEstimate avg_flatness(const Lattice& lattice, const FadingModel& model, SigmaParam sigma,
                        const MonteCarloOptions& options);

/// Same estimate for several sigma values sharing the fades of each trial.
/// Entry i equals avg_flatness(lattice, model, sigmas[i], options).
std::vector<MCEstimate> avg_flatness_curve(const Lattice& lattice, const FadingModel& model,
                                           const std::vector<SigmaParam>& sigmas,
                                           const MonteCarloOptions& options);

/// Average flatness of the effective lattice whose Gram matrix is
/// M^t (sigma^2 / sigma_s^2 I + h^t h) M.
MCEstimate avg_flatness_effective(const Lattice& lattice, const FadingModel& model,
                                  SigmaParam sigma, double sigma_s,
                                  const MonteCarloOptions& options);

std::vector<MCEstimate> avg_flatness_effective_curve(const Lattice& lattice,
                                                     const FadingModel& model,
                                                     const std::vector<SigmaParam>& sigmas,
                                                     double sigma_s,
                                                     const MonteCarloOptions& options);

/// Flatness factor of one faded Gram form under the chosen estimator.
FlatnessValue evaluate_flatness(const GramForm& gram, SigmaParam sigma,
                                const MonteCarloOptions& options);

struct GaussianEncoding {
  double sigma_s;
};

struct ModShapingEncoding {
  Lattice shaping;
};

using EncoderChoice = std::variant<GaussianEncoding, ModShapingEncoding>;

/// Fraction of trials in which Eve, decoding y = h x + n to the closest point
/// of the faded fine lattice, lands in the coset of the sent message.
MCEstimate simulate_eve_decode(const CosetCode& code, const FadingModel& model,
                               SigmaParam sigma, const EncoderChoice& encoder,
                               const MonteCarloOptions& options);

}  // namespace wiretap
