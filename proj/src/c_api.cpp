#include "wiretap/wiretap.h"

#include "wiretap/bounds.hpp"
#include "wiretap/channel.hpp"
#include "wiretap/coset_code.hpp"
#include "wiretap/enumeration.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/flatness.hpp"
#include "wiretap/lattice.hpp"
#include "wiretap/special_functions.hpp"
#include "wiretap/theta.hpp"

#include <exception>
#include <memory>
#include <mutex>
#include <new>
#include <string>
#include <vector>

struct wt_lattice {
  wiretap::Lattice lattice;
};

struct wt_coset_code {
  wiretap::CosetCode code;

  // wt_encode reuses the most recent encoder of each kind; building the
  // discrete Gaussian tables dominates the cost of a single draw.
  mutable std::mutex cache_mutex;
  mutable std::shared_ptr<const wiretap::DiscreteGaussianEncoder> gaussian;
  mutable std::shared_ptr<const wiretap::ModShapingEncoder> mod_shaping;
  mutable wiretap::Matrix mod_shaping_basis;

  std::shared_ptr<const wiretap::DiscreteGaussianEncoder> gaussian_encoder(double sigma_s) const {
    std::lock_guard lock(cache_mutex);
    if (!gaussian || gaussian->sigma_s() != sigma_s)
      gaussian = std::make_shared<const wiretap::DiscreteGaussianEncoder>(
          code, wiretap::ShapingParams{sigma_s});
    return gaussian;
  }

  std::shared_ptr<const wiretap::ModShapingEncoder> mod_encoder(
      const wiretap::Lattice& shaping) const {
    std::lock_guard lock(cache_mutex);
    if (!mod_shaping || mod_shaping_basis.rows() != shaping.basis().rows() ||
        mod_shaping_basis.cols() != shaping.basis().cols() ||
        mod_shaping_basis != shaping.basis()) {
      mod_shaping = std::make_shared<const wiretap::ModShapingEncoder>(code, shaping);
      mod_shaping_basis = shaping.basis();
    }
    return mod_shaping;
  }
};

namespace {

thread_local std::string last_error;

template <typename F>
wt_status guarded(F&& body) {
  try {
    body();
    return WT_OK;
  } catch (const wiretap::InputError& e) {
    last_error = e.what();
    return WT_INPUT_ERROR;
  } catch (const wiretap::NumericalFailure& e) {
    last_error = e.what();
    return WT_NUMERICAL_FAILURE;
  } catch (const wiretap::ValidityRangeError& e) {
    last_error = e.what();
    return WT_VALIDITY_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return WT_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return WT_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown error";
    return WT_INTERNAL_ERROR;
  }
}

template <typename T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw wiretap::InputError(std::string(what) + " must not be NULL");
}

wiretap::FadingModel to_model(const wt_fading_model* m) {
  require(m, "fading model");
  switch (m->kind) {
    case WT_FADING_DETERMINISTIC: {
      require(m->h, "fading matrix");
      if (m->m < 1 || m->n < 1) throw wiretap::InputError("fading matrix must be non-empty");
      wiretap::Matrix h = Eigen::Map<const wiretap::Matrix>(m->h, m->m, m->n);
      return wiretap::FadingModel(wiretap::DeterministicFading{h});
    }
    case WT_FADING_RAYLEIGH_DIAGONAL:
      return wiretap::FadingModel(wiretap::RayleighDiagonalFading{m->n, m->scale});
    case WT_FADING_GAUSSIAN_MIMO:
      return wiretap::FadingModel(wiretap::GaussianMimoFading{m->m, m->n, m->scale});
  }
  throw wiretap::InputError("unknown fading kind");
}

wiretap::MonteCarloOptions to_options(const wt_mc_options* o) {
  wiretap::MonteCarloOptions options;
  if (o == nullptr) return options;
  if (o->trials < 1) throw wiretap::InputError("trials must be positive");
  if (o->workers < 1) throw wiretap::InputError("workers must be positive");
  if (!(o->tol > 0.0)) throw wiretap::InputError("tol must be positive");
  options.trials = o->trials;
  options.seed = o->seed;
  options.workers = o->workers;
  options.tol = o->tol;
  switch (o->estimator) {
    case WT_ESTIMATOR_EXACT: options.estimator = wiretap::FlatnessEstimator::exact; break;
    case WT_ESTIMATOR_PROP1: options.estimator = wiretap::FlatnessEstimator::prop1; break;
    default: throw wiretap::InputError("unknown estimator");
  }
  return options;
}

wt_mc_estimate to_c(const wiretap::MCEstimate& e) {
  return {e.mean, e.std_error, e.trials, e.seed, e.resampled_fades, e.clamped_trials};
}

wt_flatness_value to_c(const wiretap::FlatnessValue& v) {
  return {v.epsilon, v.truncation_bound,
          v.representation == wiretap::Representation::primal ? WT_PRIMAL : WT_DUAL,
          v.clamped ? 1 : 0};
}

wiretap::EncoderChoice to_encoder(const wt_encoder* e) {
  require(e, "encoder");
  switch (e->kind) {
    case WT_ENCODER_GAUSSIAN: return wiretap::GaussianEncoding{e->sigma_s};
    case WT_ENCODER_MOD_SHAPING:
      require(e->shaping, "shaping lattice");
      return wiretap::ModShapingEncoding{e->shaping->lattice};
  }
  throw wiretap::InputError("unknown encoder kind");
}

void emit(wt_lattice** out, wiretap::Lattice l) {
  *out = new wt_lattice{std::move(l)};
}

}  // namespace

extern "C" {

const char* wt_last_error(void) { return last_error.c_str(); }
const char* wt_version(void) { return "0.1.0"; }

size_t wt_catalog_count(void) { return wiretap::catalog_names().size(); }

const char* wt_catalog_name(size_t i) {
  const auto& names = wiretap::catalog_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

wt_status wt_lattice_from_catalog(const char* name, wt_lattice** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    emit(out, wiretap::catalog(name));
  });
}

wt_status wt_lattice_load(const char* name_or_path, wt_lattice** out) {
  return guarded([&] {
    require(name_or_path, "name");
    require(out, "out");
    emit(out, wiretap::load_lattice(name_or_path));
  });
}

wt_status wt_lattice_from_basis(int n, int s, const double* basis, wt_lattice** out) {
  return guarded([&] {
    require(basis, "basis");
    require(out, "out");
    if (n < 1 || s < 1) throw wiretap::InputError("basis dimensions must be positive");
    emit(out, wiretap::Lattice(Eigen::Map<const wiretap::Matrix>(basis, n, s)));
  });
}

wt_status wt_lattice_scaled(const wt_lattice* lattice, double factor, wt_lattice** out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    emit(out, wiretap::scaled(lattice->lattice, factor));
  });
}

wt_status wt_lattice_dual(const wt_lattice* lattice, wt_lattice** out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    emit(out, wiretap::dual(lattice->lattice));
  });
}

void wt_lattice_free(wt_lattice* lattice) { delete lattice; }

int wt_lattice_dimension(const wt_lattice* lattice) {
  return lattice ? lattice->lattice.dimension() : 0;
}

int wt_lattice_rank(const wt_lattice* lattice) { return lattice ? lattice->lattice.rank() : 0; }

wt_status wt_lattice_basis(const wt_lattice* lattice, double* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    const auto& b = lattice->lattice.basis();
    Eigen::Map<wiretap::Matrix>(out, b.rows(), b.cols()) = b;
  });
}

wt_status wt_lattice_volume(const wt_lattice* lattice, double* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    *out = wiretap::volume(lattice->lattice);
  });
}

wt_status wt_lattice_index(const wt_lattice* sub, const wt_lattice* super, int64_t* out) {
  return guarded([&] {
    require(sub, "sublattice");
    require(super, "lattice");
    require(out, "out");
    *out = wiretap::index_of_sublattice(sub->lattice, super->lattice).index;
  });
}

wt_status wt_lattice_summary(const wt_lattice* lattice, const wt_lattice* ambient,
                             wt_summary* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    const auto s = ambient ? wiretap::summarize(lattice->lattice, ambient->lattice)
                           : wiretap::summarize(lattice->lattice);
    *out = {s.minimal_norm, s.kissing, s.well_rounded ? 1 : 0, s.volume,
            s.index ? 1 : 0, s.index.value_or(0)};
  });
}

wt_status wt_closest_vector(const wt_lattice* lattice, const double* target, double* point,
                            int64_t* coefficients) {
  return guarded([&] {
    require(lattice, "lattice");
    require(target, "target");
    const auto& l = lattice->lattice;
    const auto cp = wiretap::closest_vector(
        l, Eigen::Map<const wiretap::Vector>(target, l.dimension()));
    if (point) Eigen::Map<wiretap::Vector>(point, l.dimension()) = cp.point;
    if (coefficients) Eigen::Map<wiretap::IntVector>(coefficients, l.rank()) = cp.coefficients;
  });
}

wt_status wt_theta_exact(const wt_lattice* lattice, double tau, double tol,
                         wt_theta_value* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    if (!(tol > 0.0)) throw wiretap::InputError("tol must be positive");
    const auto v = wiretap::theta_exact(wiretap::gram(lattice->lattice),
                                        wiretap::ThetaQuery(tau), tol);
    *out = {v.value, v.truncation_bound};
  });
}

wt_status wt_theta_approx(const wt_lattice* lattice, double tau, wt_theta_value* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    const auto v = wiretap::theta_approx(
        wiretap::approx_params(wiretap::gram(lattice->lattice)), tau);
    *out = {v.value, v.truncation_bound};
  });
}

wt_status wt_theta_approx_params(int n, double volume, double minimal_norm, double tau,
                                 wt_theta_value* out) {
  return guarded([&] {
    require(out, "out");
    const auto v = wiretap::theta_approx({n, volume, minimal_norm}, tau);
    *out = {v.value, v.truncation_bound};
  });
}

wt_status wt_theta_closed_form(wt_closed_form family, int n, double q, double* out) {
  return guarded([&] {
    require(out, "out");
    switch (family) {
      case WT_CLOSED_FORM_ZN:
        *out = wiretap::theta_closed_form(wiretap::ClosedFormFamily::integer_lattice, n, q);
        return;
      case WT_CLOSED_FORM_D4:
        *out = wiretap::theta_closed_form(wiretap::ClosedFormFamily::d4, n, q);
        return;
    }
    throw wiretap::InputError("unknown closed-form family");
  });
}

wt_status wt_incomplete_gamma_upper(double s, double x, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = wiretap::incomplete_gamma_upper(s, x);
  });
}

wt_status wt_flatness(const wt_lattice* lattice, double sigma, double tol,
                      wt_flatness_value* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    *out = to_c(wiretap::flatness_factor(lattice->lattice, wiretap::SigmaParam(sigma), tol));
  });
}

wt_status wt_flatness_in(const wt_lattice* lattice, double sigma, double tol,
                         wt_representation representation, wt_flatness_value* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    const auto g = wiretap::gram(lattice->lattice);
    const wiretap::SigmaParam s(sigma);
    switch (representation) {
      case WT_PRIMAL:
        *out = to_c(wiretap::flatness_primal(g, wiretap::volume(lattice->lattice), s, tol));
        return;
      case WT_DUAL:
        *out = to_c(wiretap::flatness_dual(g, s, tol));
        return;
    }
    throw wiretap::InputError("unknown representation");
  });
}

wt_mc_options wt_mc_options_default(void) {
  const wiretap::MonteCarloOptions d;
  return {d.trials, d.seed, d.workers, d.tol, WT_ESTIMATOR_EXACT};
}

wt_status wt_avg_flatness(const wt_lattice* lattice, const wt_fading_model* model,
                          double sigma, const wt_mc_options* options, wt_mc_estimate* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    *out = to_c(wiretap::avg_flatness(lattice->lattice, to_model(model),
                                      wiretap::SigmaParam(sigma), to_options(options)));
  });
}

wt_status wt_avg_flatness_curve(const wt_lattice* lattice, const wt_fading_model* model,
                                const double* sigmas, size_t count,
                                const wt_mc_options* options, wt_mc_estimate* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(sigmas, "sigmas");
    require(out, "out");
    std::vector<wiretap::SigmaParam> params;
    params.reserve(count);
    for (size_t i = 0; i < count; ++i) params.emplace_back(sigmas[i]);
    const auto curve =
        wiretap::avg_flatness_curve(lattice->lattice, to_model(model), params, to_options(options));
    for (size_t i = 0; i < count; ++i) out[i] = to_c(curve[i]);
  });
}

wt_status wt_avg_flatness_effective(const wt_lattice* lattice, const wt_fading_model* model,
                                    double sigma, double sigma_s,
                                    const wt_mc_options* options, wt_mc_estimate* out) {
  return guarded([&] {
    require(lattice, "lattice");
    require(out, "out");
    *out = to_c(wiretap::avg_flatness_effective(lattice->lattice, to_model(model),
                                                wiretap::SigmaParam(sigma), sigma_s,
                                                to_options(options)));
  });
}

wt_status wt_coset_code_create(const wt_lattice* fine, const wt_lattice* coarse,
                               wt_coset_code** out) {
  return guarded([&] {
    require(fine, "fine lattice");
    require(coarse, "coarse lattice");
    require(out, "out");
    *out = new wt_coset_code{
        wiretap::CosetCode(wiretap::NestedPair(fine->lattice, coarse->lattice))};
  });
}

void wt_coset_code_free(wt_coset_code* code) { delete code; }

int64_t wt_coset_code_size(const wt_coset_code* code) { return code ? code->code.size() : 0; }

wt_status wt_coset_code_representative(const wt_coset_code* code, int64_t message,
                                       double* out) {
  return guarded([&] {
    require(code, "code");
    require(out, "out");
    const auto& p = code->code.representative(wiretap::Message{message});
    Eigen::Map<wiretap::Vector>(out, p.size()) = p;
  });
}

wt_status wt_encode(const wt_coset_code* code, const wt_encoder* encoder, int64_t message,
                    uint64_t seed, uint64_t trial, double* out) {
  return guarded([&] {
    require(code, "code");
    require(out, "out");
    auto rng = wiretap::trial_stream(seed, trial);
    const auto choice = to_encoder(encoder);
    const wiretap::Message m{message};
    wiretap::Vector x;
    if (const auto* g = std::get_if<wiretap::GaussianEncoding>(&choice))
      x = code->gaussian_encoder(g->sigma_s)->encode(m, rng);
    else
      x = code->mod_encoder(std::get<wiretap::ModShapingEncoding>(choice).shaping)->encode(m, rng);
    Eigen::Map<wiretap::Vector>(out, x.size()) = x;
  });
}

wt_status wt_simulate_eve(const wt_coset_code* code, const wt_fading_model* model, double sigma,
                          const wt_encoder* encoder, const wt_mc_options* options,
                          wt_mc_estimate* out) {
  return guarded([&] {
    require(code, "code");
    require(out, "out");
    *out = to_c(wiretap::simulate_eve_decode(code->code, to_model(model),
                                             wiretap::SigmaParam(sigma), to_encoder(encoder),
                                             to_options(options)));
  });
}

wt_status wt_eve_prob_bound(int64_t index, double avg_eps, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = wiretap::eve_prob_bound(index, avg_eps);
  });
}

wt_status wt_mod_lambda_info_bound(double avg_eps, int64_t message_count, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = wiretap::mod_lambda_info_bound(avg_eps, message_count);
  });
}

wt_status wt_gaussian_info_bound(double avg_eps, int64_t message_count, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = wiretap::gaussian_info_bound(avg_eps, message_count);
  });
}

wt_status wt_bound_report_run(const wt_coset_code* code, const wt_fading_model* model,
                              double sigma, double sigma_s, const wt_mc_options* options,
                              wt_bound_report* out) {
  return guarded([&] {
    require(code, "code");
    require(out, "out");
    std::optional<double> ss;
    if (sigma_s > 0.0) ss = sigma_s;
    const auto r = wiretap::bound_report(code->code.pair(), to_model(model),
                                         wiretap::SigmaParam(sigma), ss, to_options(options));
    wt_bound_report c{};
    c.index = r.index;
    c.sigma = r.sigma;
    c.has_sigma_s = r.sigma_s ? 1 : 0;
    c.sigma_s = r.sigma_s.value_or(0.0);
    c.avg_eps = to_c(r.avg_eps);
    if (r.avg_eps_effective) {
      c.has_avg_eps_effective = 1;
      c.avg_eps_effective = to_c(*r.avg_eps_effective);
    }
    c.prob_bound = r.prob_bound;
    c.mod_lambda_valid = r.mod_lambda_info_nats ? 1 : 0;
    c.mod_lambda_info_nats = r.mod_lambda_info_nats.value_or(0.0);
    c.gaussian_valid = r.gaussian_info_nats ? 1 : 0;
    c.gaussian_info_nats = r.gaussian_info_nats.value_or(0.0);
    *out = c;
  });
}

}  // extern "C"
