#include "wiretap/channel.hpp"

#include "wiretap/errors.hpp"
#include "wiretap/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

namespace wiretap {

namespace {

constexpr double kRankDeficiency = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct TrialOutcome {
  std::vector<double> values;
  std::vector<bool> clamped;
  std::int64_t resampled = 0;
};

// Runs fn(trial) for every trial on `workers` threads. Each trial writes only
// its own slot, so the output is independent of scheduling. On failure the
// lowest failing trial index is reported.
template <class Fn>
std::vector<TrialOutcome> run_trials(std::int64_t trials, int workers, Fn&& fn) {
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(trials)));
  std::mutex failure_mutex;
  std::int64_t failed_trial = -1;
  std::exception_ptr failure;

  auto work = [&](int worker) {
    for (std::int64_t t = worker; t < trials; t += count) {
      try {
        outcomes[static_cast<std::size_t>(t)] = fn(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (failed_trial < 0 || t < failed_trial) {
          failed_trial = t;
          failure = std::current_exception();
        }
        return;
      }
    }
  };

  if (count == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) threads.emplace_back(work, w);
  }

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("trial " + std::to_string(failed_trial) + ": " + e.what(),
                             e.best_value(), e.best_bound());
    } catch (const InputError& e) {
      throw InputError("trial " + std::to_string(failed_trial) + ": " + e.what());
    }
  }
  return outcomes;
}

void check_options(const MonteCarloOptions& options) {
  if (options.trials < 2) throw InputError("Monte Carlo needs at least 2 trials");
  if (!(options.tol > 0.0)) throw InputError("tolerance must be positive");
}

void check_model_fits(const FadingModel& model, const Lattice& lattice) {
  if (model.input_dimension() != lattice.dimension())
    throw InputError("fading model input dimension does not match the lattice");
}

std::vector<MCEstimate> reduce(const std::vector<TrialOutcome>& outcomes, std::size_t count,
                               std::uint64_t seed) {
  std::vector<MCEstimate> estimates;
  std::int64_t resampled = 0;
  std::vector<std::int64_t> clamped(count, 0);
  for (const auto& o : outcomes) {
    resampled += o.resampled;
    for (std::size_t i = 0; i < o.clamped.size() && i < count; ++i)
      if (o.clamped[i]) ++clamped[i];
  }
  std::vector<double> column(outcomes.size());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t t = 0; t < outcomes.size(); ++t) column[t] = outcomes[t].values[i];
    MCEstimate e = summarize_trials(column, seed);
    e.resampled_fades = resampled;
    e.clamped_trials = clamped[i];
    estimates.push_back(e);
  }
  return estimates;
}

// Neumaier summation in index order.
double stable_sum(const std::vector<double>& values) {
  double sum = 0.0, carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + carry;
}

}  // namespace

FadingModel::FadingModel(Variant model) : model_(std::move(model)) {
  std::visit(Overloaded{
                 [](const DeterministicFading& d) {
                   if (d.h.size() == 0 || !d.h.allFinite())
                     throw InputError("deterministic fading matrix must be finite and non-empty");
                   if (d.h.rows() < d.h.cols())
                     throw InputError("deterministic fading matrix must have full column rank");
                   Eigen::FullPivLU<Matrix> lu(d.h);
                   if (lu.rank() < d.h.cols())
                     throw InputError("deterministic fading matrix must have full column rank");
                 },
                 [](const RayleighDiagonalFading& r) {
                   if (r.n < 1) throw InputError("Rayleigh model needs n >= 1");
                   if (!(r.scale > 0.0)) throw InputError("Rayleigh scale must be positive");
                 },
                 [](const GaussianMimoFading& g) {
                   if (g.n < 1 || g.m < g.n)
                     throw InputError("MIMO model needs m >= n >= 1 for full column rank");
                   if (!(g.entry_std > 0.0))
                     throw InputError("MIMO entry deviation must be positive");
                 }},
             model_);
}

int FadingModel::input_dimension() const {
  return std::visit(Overloaded{[](const DeterministicFading& d) { return int(d.h.cols()); },
                               [](const RayleighDiagonalFading& r) { return r.n; },
                               [](const GaussianMimoFading& g) { return g.n; }},
                    model_);
}

int FadingModel::output_dimension() const {
  return std::visit(Overloaded{[](const DeterministicFading& d) { return int(d.h.rows()); },
                               [](const RayleighDiagonalFading& r) { return r.n; },
                               [](const GaussianMimoFading& g) { return g.m; }},
                    model_);
}

double FadingModel::scale() const {
  return std::visit(
      Overloaded{[](const DeterministicFading& d) { return std::max(d.h.cwiseAbs().maxCoeff(), 1e-300); },
                 [](const RayleighDiagonalFading& r) { return r.scale; },
                 [](const GaussianMimoFading& g) { return g.entry_std; }},
      model_);
}

RandomStream trial_stream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq sequence{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(trial),
                         static_cast<std::uint32_t>(trial >> 32)};
  return RandomStream(sequence);
}

Matrix sample_fading(const FadingModel& model, RandomStream& rng) {
  return std::visit(
      Overloaded{[](const DeterministicFading& d) -> Matrix { return d.h; },
                 [&rng](const RayleighDiagonalFading& r) -> Matrix {
                   // h^2 ~ scale^2 * Exp(1), so E[h^2] = scale^2.
                   std::uniform_real_distribution<double> uniform(0.0, 1.0);
                   Matrix h = Matrix::Zero(r.n, r.n);
                   for (int i = 0; i < r.n; ++i)
                     h(i, i) = r.scale * std::sqrt(-std::log1p(-uniform(rng)));
                   return h;
                 },
                 [&rng](const GaussianMimoFading& g) -> Matrix {
                   std::normal_distribution<double> normal(0.0, g.entry_std);
                   Matrix h(g.m, g.n);
                   for (int j = 0; j < g.n; ++j)
                     for (int i = 0; i < g.m; ++i) h(i, j) = normal(rng);
                   return h;
                 }},
      model.variant());
}

Matrix sample_full_rank_fading(const FadingModel& model, RandomStream& rng,
                               std::int64_t& rejected) {
  const double threshold = kRankDeficiency * std::pow(model.scale(), model.input_dimension());
  while (true) {
    Matrix h = sample_fading(model, rng);
    const double det = (h.transpose() * h).determinant();
    if (det > 0.0 && std::sqrt(det) > threshold) return h;
    ++rejected;
  }
}

MCEstimate summarize_trials(const std::vector<double>& values, std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(values.size());
  if (n < 2) throw InputError("Monte Carlo needs at least 2 trials");
  const double mean = stable_sum(values) / static_cast<double>(n);
  std::vector<double> squares(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    squares[i] = (values[i] - mean) * (values[i] - mean);
  const double variance = stable_sum(squares) / static_cast<double>(n - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n)), n, seed};
}

FlatnessValue evaluate_flatness(const GramForm& gram, SigmaParam sigma,
                                const MonteCarloOptions& options) {
  if (options.estimator == FlatnessEstimator::prop1) {
    // eps = nu tau^{n/2} Theta(exp(-pi tau)) - 1 with Theta replaced by the
    // volume/minimal-norm main term at tau = 1 / (2 pi sigma^2), which
    // simplifies to nu tau^{n/2} - P(n/2 + 1, pi tau lambda_min).
    const double tau = sigma.tau();
    const double half = 0.5 * gram.rank();
    const double epsilon =
        gram.volume() * std::pow(tau, half) -
        regularized_gamma_p(half + 1.0, std::numbers::pi * tau * minimal_norm(gram).value);
    if (epsilon < 0.0) return {0.0, 0.0, Representation::primal, true};
    return {epsilon, 0.0, Representation::primal, false};
  }
  return flatness_from_gram(gram, gram.volume(), sigma, options.tol, options.limits);
}

std::vector<MCEstimate> avg_flatness_curve(const Lattice& lattice, const FadingModel& model,
                                           const std::vector<SigmaParam>& sigmas,
                                           const MonteCarloOptions& options) {
  check_options(options);
  check_model_fits(model, lattice);
  const auto outcomes = run_trials(options.trials, options.workers, [&](std::int64_t t) {
    RandomStream rng = trial_stream(options.seed, static_cast<std::uint64_t>(t));
    TrialOutcome out;
    const Matrix h = sample_full_rank_fading(model, rng, out.resampled);
    const GramForm faded = gram(apply_fading(lattice, h));
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      const auto value = evaluate_flatness(faded, sigmas[i], options);
      out.clamped.push_back(value.clamped);
      out.values.push_back(value.epsilon);
    }
    return out;
  });
  return reduce(outcomes, sigmas.size(), options.seed);
}

MCEstimate avg_flatness(const Lattice& lattice, const FadingModel& model, SigmaParam sigma,
                        const MonteCarloOptions& options) {
  return avg_flatness_curve(lattice, model, {sigma}, options).front();
}

std::vector<MCEstimate> avg_flatness_effective_curve(const Lattice& lattice,
                                                     const FadingModel& model,
                                                     const std::vector<SigmaParam>& sigmas,
                                                     double sigma_s,
                                                     const MonteCarloOptions& options) {
  check_options(options);
  check_model_fits(model, lattice);
  if (!(sigma_s > 0.0)) throw InputError("shaping sigma must be positive");
  const Matrix& basis = lattice.basis();
  const auto outcomes = run_trials(options.trials, options.workers, [&](std::int64_t t) {
    RandomStream rng = trial_stream(options.seed, static_cast<std::uint64_t>(t));
    TrialOutcome out;
    const Matrix h = sample_full_rank_fading(model, rng, out.resampled);
    const Matrix hth = h.transpose() * h;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
      const double ratio = sigmas[i].sigma() / sigma_s;
      const Matrix inner =
          ratio * ratio * Matrix::Identity(hth.rows(), hth.cols()) + hth;
      const GramForm effective(basis.transpose() * inner * basis);
      const auto value = evaluate_flatness(effective, sigmas[i], options);
      out.clamped.push_back(value.clamped);
      out.values.push_back(value.epsilon);
    }
    return out;
  });
  return reduce(outcomes, sigmas.size(), options.seed);
}

MCEstimate avg_flatness_effective(const Lattice& lattice, const FadingModel& model,
                                  SigmaParam sigma, double sigma_s,
                                  const MonteCarloOptions& options) {
  return avg_flatness_effective_curve(lattice, model, {sigma}, sigma_s, options).front();
}

MCEstimate simulate_eve_decode(const CosetCode& code, const FadingModel& model,
                               SigmaParam sigma, const EncoderChoice& encoder,
                               const MonteCarloOptions& options) {
  check_options(options);
  const Lattice& fine = code.pair().fine();
  check_model_fits(model, fine);

  std::optional<DiscreteGaussianEncoder> gaussian;
  std::optional<ModShapingEncoder> mod_shaping;
  std::visit(Overloaded{[&](const GaussianEncoding& g) {
                          gaussian.emplace(code, ShapingParams{g.sigma_s});
                        },
                        [&](const ModShapingEncoding& m) { mod_shaping.emplace(code, m.shaping); }},
             encoder);

  const auto outcomes = run_trials(options.trials, options.workers, [&](std::int64_t t) {
    RandomStream rng = trial_stream(options.seed, static_cast<std::uint64_t>(t));
    TrialOutcome out;
    const Matrix h = sample_full_rank_fading(model, rng, out.resampled);
    const Message m{std::uniform_int_distribution<std::int64_t>(0, code.size() - 1)(rng)};
    const Vector x = gaussian ? gaussian->encode(m, rng) : mod_shaping->encode(m, rng);
    std::normal_distribution<double> noise(0.0, sigma.sigma());
    Vector y = h * x;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += noise(rng);
    const ClosestPointSolver eve(apply_fading(fine, h));
    const auto decoded = eve.solve(y);
    out.values.push_back(code.coset_of(decoded.coefficients).id == m.id ? 1.0 : 0.0);
    return out;
  });
  return reduce(outcomes, 1, options.seed).front();
}

}  // namespace wiretap
