#pragma once

#include "wiretap/channel.hpp"
#include "wiretap/coset_code.hpp"

#include <cstdint>
#include <optional>

namespace wiretap {

/// index^{-1} (avg_eps + 1): upper bound on Eve's probability of decoding
/// the right coset.
double eve_prob_bound(std::int64_t index, double avg_eps);

/// Information leaked in the mod-Lambda_s setup, in nats:
///   2 (e + 1) E log|M| - 2 E log(2 E),   valid for E <= 1 / (2e), |M| >= 4.
/// Throws ValidityRangeError outside that range.
double mod_lambda_info_bound(double avg_eps, std::int64_t message_count);

/// Information leaked with discrete Gaussian coset coding, in nats:
///   8 (1 + e) E log|M| - 8 E log(8 E),   valid for E <= 1 / (8e), |M| >= 4.
double gaussian_info_bound(double avg_eps_effective, std::int64_t message_count);

constexpr double kModLambdaThreshold = 0.18393972058572117;  // e^{-1} / 2
constexpr double kGaussianThreshold = 0.045984930146430292;  // 1 / (8 e)

inline double nats_to_bits(double nats) { return nats / 0.69314718055994531; }

struct BoundReport {
  std::int64_t index;
  double sigma;
  std::optional<double> sigma_s;
  /// E_H[eps] of the faded coarse lattice.
  MCEstimate avg_eps;
  /// E of the effective lattice; present iff sigma_s was given.
  std::optional<MCEstimate> avg_eps_effective;

  double prob_bound;
  /// Empty when the estimate lies outside the bound's validity range.
  std::optional<double> mod_lambda_info_nats;
  std::optional<double> gaussian_info_nats;
};

/// Runs the Monte Carlo estimators for one sigma and applies the three
/// bounds. Out-of-range estimates leave the information bounds empty instead
/// of throwing.
BoundReport bound_report(const NestedPair& pair, const FadingModel& model, SigmaParam sigma,
                         std::optional<double> sigma_s, const MonteCarloOptions& options);

}  // namespace wiretap
