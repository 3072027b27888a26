#include "wiretap/bounds.hpp"

#include "wiretap/errors.hpp"

#include <cmath>
#include <numbers>

namespace wiretap {

namespace {

// x log x with the continuous extension 0 log 0 = 0.
double x_log_x(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

void check_information_inputs(double avg_eps, std::int64_t message_count, double threshold) {
  if (message_count < 4) throw ValidityRangeError("information bounds need |M| >= 4");
  if (!(avg_eps >= 0.0)) throw ValidityRangeError("average flatness factor must be >= 0");
  if (avg_eps > threshold)
    throw ValidityRangeError("average flatness factor exceeds the bound's validity threshold");
}

}  // namespace

double eve_prob_bound(std::int64_t index, double avg_eps) {
  if (index < 1) throw InputError("index must be positive");
  if (!(avg_eps >= 0.0)) throw InputError("average flatness factor must be >= 0");
  return (avg_eps + 1.0) / static_cast<double>(index);
}

double mod_lambda_info_bound(double avg_eps, std::int64_t message_count) {
  check_information_inputs(avg_eps, message_count, kModLambdaThreshold);
  const double log_m = std::log(static_cast<double>(message_count));
  return 2.0 * (std::numbers::e + 1.0) * avg_eps * log_m - x_log_x(2.0 * avg_eps);
}

double gaussian_info_bound(double avg_eps_effective, std::int64_t message_count) {
  check_information_inputs(avg_eps_effective, message_count, kGaussianThreshold);
  const double log_m = std::log(static_cast<double>(message_count));
  return 8.0 * (1.0 + std::numbers::e) * avg_eps_effective * log_m -
         x_log_x(8.0 * avg_eps_effective);
}

BoundReport bound_report(const NestedPair& pair, const FadingModel& model, SigmaParam sigma,
                         std::optional<double> sigma_s, const MonteCarloOptions& options) {
  BoundReport report{pair.index(), sigma.sigma(), sigma_s,
                     avg_flatness(pair.coarse(), model, sigma, options),
                     std::nullopt, 0.0, std::nullopt, std::nullopt};
  report.prob_bound = eve_prob_bound(pair.index(), report.avg_eps.mean);
  try {
    report.mod_lambda_info_nats = mod_lambda_info_bound(report.avg_eps.mean, pair.index());
  } catch (const ValidityRangeError&) {
  }
  if (sigma_s) {
    report.avg_eps_effective =
        avg_flatness_effective(pair.coarse(), model, sigma, *sigma_s, options);
    try {
      report.gaussian_info_nats =
          gaussian_info_bound(report.avg_eps_effective->mean, pair.index());
    } catch (const ValidityRangeError&) {
    }
  }
  return report;
}

}  // namespace wiretap
