#include "wiretap/channel.hpp"

#include "gtest/gtest.h"
#include "wiretap/errors.hpp"

#include <cmath>
#include <numbers>

namespace wiretap {
namespace {

MonteCarloOptions options(std::int64_t trials, std::uint64_t seed = 42) {
  MonteCarloOptions o;
  o.trials = trials;
  o.seed = seed;
  o.tol = 1e-9;
  return o;
}

TEST(Fading, RayleighSecondMoment) {
  const FadingModel model(RayleighDiagonalFading{3, 2.0});
  RandomStream rng(1);
  const int draws = 200'000;
  double sum = 0.0, sum4 = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Matrix h = sample_fading(model, rng);
    ASSERT_EQ(h(0, 1), 0.0);
    sum += h(1, 1) * h(1, 1);
    sum4 += std::pow(h(1, 1), 4);
  }
  // h^2 / scale^2 ~ Exp(1): mean 1, variance 1.
  const double mean = sum / draws;
  EXPECT_NEAR(mean, 4.0, 5 * 4.0 / std::sqrt(draws));
  EXPECT_NEAR(sum4 / draws, 2 * 16.0, 0.05 * 32.0);
}

TEST(Fading, MimoIsFullRankAndCentered) {
  const FadingModel model(GaussianMimoFading{5, 3, 1.5});
  RandomStream rng(2);
  double sum = 0.0, sq = 0.0;
  const int draws = 20'000;
  std::int64_t rejected = 0;
  for (int i = 0; i < draws; ++i) {
    const Matrix h = sample_full_rank_fading(model, rng, rejected);
    ASSERT_EQ(h.rows(), 5);
    ASSERT_EQ(h.cols(), 3);
    EXPECT_GT((h.transpose() * h).determinant(), 0.0);
    sum += h(4, 2);
    sq += h(4, 2) * h(4, 2);
  }
  EXPECT_EQ(rejected, 0);
  EXPECT_NEAR(sum / draws, 0.0, 5 * 1.5 / std::sqrt(draws));
  EXPECT_NEAR(sq / draws, 2.25, 0.1);
}

TEST(Fading, ModelValidation) {
  EXPECT_THROW(FadingModel(RayleighDiagonalFading{0, 1.0}), InputError);
  EXPECT_THROW(FadingModel(RayleighDiagonalFading{2, 0.0}), InputError);
  EXPECT_THROW(FadingModel(GaussianMimoFading{2, 3, 1.0}), InputError);
  EXPECT_THROW(FadingModel(DeterministicFading{Matrix::Zero(2, 2)}), InputError);
  EXPECT_NO_THROW(FadingModel(DeterministicFading{Matrix::Identity(3, 2)}));
}

TEST(Fading, TrialStreamsAreReproducible) {
  RandomStream a = trial_stream(42, 7), b = trial_stream(42, 7), c = trial_stream(42, 8);
  EXPECT_EQ(a(), b());
  EXPECT_NE(trial_stream(42, 7)(), c());
}

TEST(AvgFlatness, DeterministicIdentityIsTheFlatnessFactor) {
  const Lattice l = catalog("Lambda1");
  const FadingModel identity(DeterministicFading{Matrix::Identity(2, 2)});
  const SigmaParam sigma(2.0);
  const auto e = avg_flatness(l, identity, sigma, options(5));
  EXPECT_NEAR(e.mean, flatness_factor(l, sigma, 1e-12).epsilon, 1e-9);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.trials, 5);
}

TEST(AvgFlatness, ResultDoesNotDependOnWorkers) {
  const Lattice l = catalog("Pi2");
  const FadingModel model(RayleighDiagonalFading{4, 1.0});
  const std::vector<SigmaParam> sigmas{SigmaParam(3.0), SigmaParam(6.0)};
  auto o = options(200, 9);
  const auto one = avg_flatness_curve(l, model, sigmas, o);
  o.workers = 4;
  const auto four = avg_flatness_curve(l, model, sigmas, o);
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    EXPECT_EQ(one[i].mean, four[i].mean);
    EXPECT_EQ(one[i].std_error, four[i].std_error);
  }
  // Curve entries equal the single-sigma estimate.
  EXPECT_EQ(avg_flatness(l, model, sigmas[1], options(200, 9)).mean, one[1].mean);
}

TEST(AvgFlatness, StandardErrorShrinksLikeRootTrials) {
  const Lattice l = catalog("Lambda1");
  const FadingModel model(RayleighDiagonalFading{2, 1.0});
  auto o = options(400, 3);
  o.estimator = FlatnessEstimator::prop1;
  const auto small = avg_flatness(l, model, SigmaParam(2.0), o);
  o.trials = 1600;
  const auto large = avg_flatness(l, model, SigmaParam(2.0), o);
  EXPECT_NEAR(small.std_error / large.std_error, 2.0, 0.4);
}

TEST(AvgFlatness, SummaryStatistics) {
  const auto e = summarize_trials({1.0, 2.0, 3.0, 4.0}, 5);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_EQ(e.seed, 5u);
  EXPECT_THROW(summarize_trials({1.0}, 0), InputError);
}

TEST(AvgFlatness, Prop1EstimatorFormula) {
  // nu tau^{n/2} - P(n/2 + 1, pi tau lambda) for Z2 at tau = 1: 1 - P(2, pi).
  const GramForm g(Matrix::Identity(2, 2));
  auto o = options(2);
  o.estimator = FlatnessEstimator::prop1;
  const auto v = evaluate_flatness(g, SigmaParam::from_tau(1.0), o);
  EXPECT_NEAR(v.epsilon, (1.0 + std::numbers::pi) * std::exp(-std::numbers::pi), 1e-13);
  EXPECT_FALSE(v.clamped);
}

TEST(AvgFlatness, RejectsMismatchedModels) {
  EXPECT_THROW(avg_flatness(catalog("D4"), FadingModel(RayleighDiagonalFading{2}),
                            SigmaParam(1.0), options(10)),
               InputError);
  EXPECT_THROW(avg_flatness(catalog("Z2"), FadingModel(RayleighDiagonalFading{2}),
                            SigmaParam(1.0), options(1)),
               InputError);
}

TEST(EffectiveFlatness, ApproachesFadedFlatnessForLargeShaping) {
  const Lattice l = catalog("Lambda1");
  const FadingModel model(RayleighDiagonalFading{2, 1.0});
  const SigmaParam sigma(3.0);
  const auto plain = avg_flatness(l, model, sigma, options(100));
  const auto effective = avg_flatness_effective(l, model, sigma, 1e6, options(100));
  EXPECT_NEAR(effective.mean, plain.mean, 1e-6 * plain.mean + 1e-9);
}

TEST(EffectiveFlatness, GrowsWithShapingSigma) {
  // A smaller sigma_s adds more to the effective Gram matrix, so the
  // lattice gets sparser and less flat.
  const Lattice l = catalog("Lambda1");
  const FadingModel model(RayleighDiagonalFading{2, 1.0});
  double previous = 0.0;
  for (double sigma_s : {1e3, 10.0, 3.0, 1.0}) {
    const double e = avg_flatness_effective(l, model, SigmaParam(3.0), sigma_s, options(100)).mean;
    EXPECT_GE(e, previous);
    previous = e;
  }
}

TEST(EveDecoding, NoiselessChannelAlwaysSucceeds) {
  const CosetCode code(NestedPair(catalog("Z2"), catalog("Lambda1")));
  const FadingModel model(RayleighDiagonalFading{2, 1.0});
  const auto e = simulate_eve_decode(code, model, SigmaParam(1e-4),
                                     GaussianEncoding{4.0}, options(300));
  EXPECT_GT(e.mean, 0.97);
}

TEST(EveDecoding, NoisyChannelApproachesGuessing) {
  const CosetCode code(NestedPair(catalog("Z2"), catalog("Lambda1")));
  const FadingModel identity(DeterministicFading{Matrix::Identity(2, 2)});
  const auto e = simulate_eve_decode(code, identity, SigmaParam(50.0),
                                     ModShapingEncoding{scaled(catalog("Lambda1"), 4.0)},
                                     options(4000));
  EXPECT_NEAR(e.mean, 1.0 / 16.0, 4 * e.std_error);
}

TEST(EveDecoding, StaysBelowTheFlatnessBound) {
  const CosetCode code(NestedPair(catalog("Z2"), catalog("Lambda1")));
  const FadingModel model(RayleighDiagonalFading{2, 1.0});
  const SigmaParam sigma(2.0);
  auto o = options(2000);
  const auto success = simulate_eve_decode(code, model, sigma, GaussianEncoding{4.0}, o);
  const auto eps = avg_flatness(code.pair().coarse(), model, sigma, o);
  EXPECT_LE(success.mean, (eps.mean + 1.0) / 16.0 + 3 * success.std_error);
}

}  // namespace
}  // namespace wiretap
