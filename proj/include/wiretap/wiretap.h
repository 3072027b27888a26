/*
 * C interface to the wiretap lattice library.
 *
 * Objects are opaque handles created by wt_*_create / wt_*_load functions and
 * released with the matching wt_*_free. Every fallible call returns a
 * wt_status; on failure a description is available from wt_last_error() on
 * the calling thread until its next failing call. Matrices are passed
 * column-major.
 */
#ifndef WIRETAP_WIRETAP_H
#define WIRETAP_WIRETAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(WIRETAP_BUILDING_LIBRARY)
#define WT_API __attribute__((visibility("default")))
#else
#define WT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum wt_status {
  WT_OK = 0,
  WT_INPUT_ERROR = 1,
  WT_NUMERICAL_FAILURE = 2,
  WT_VALIDITY_ERROR = 3,
  WT_INTERNAL_ERROR = 4
} wt_status;

typedef struct wt_lattice wt_lattice;
typedef struct wt_coset_code wt_coset_code;

WT_API const char* wt_last_error(void);
WT_API const char* wt_version(void);

/* ---- lattices ---------------------------------------------------------- */

WT_API size_t wt_catalog_count(void);
/* Name of catalog entry i, or NULL when out of range. */
WT_API const char* wt_catalog_name(size_t i);

WT_API wt_status wt_lattice_from_catalog(const char* name, wt_lattice** out);
/* Catalog name, or a path to the "n s" + rows text format. */
WT_API wt_status wt_lattice_load(const char* name_or_path, wt_lattice** out);
WT_API wt_status wt_lattice_from_basis(int n, int s, const double* basis_colmajor,
                                       wt_lattice** out);
WT_API wt_status wt_lattice_scaled(const wt_lattice* lattice, double factor,
                                   wt_lattice** out);
WT_API wt_status wt_lattice_dual(const wt_lattice* lattice, wt_lattice** out);
WT_API void wt_lattice_free(wt_lattice* lattice);

WT_API int wt_lattice_dimension(const wt_lattice* lattice);
WT_API int wt_lattice_rank(const wt_lattice* lattice);
/* Copies n*s entries, column-major. */
WT_API wt_status wt_lattice_basis(const wt_lattice* lattice, double* out);
WT_API wt_status wt_lattice_volume(const wt_lattice* lattice, double* out);
/* Index of sub in super. */
WT_API wt_status wt_lattice_index(const wt_lattice* sub, const wt_lattice* super,
                                  int64_t* out);

typedef struct wt_summary {
  double minimal_norm;
  int64_t kissing;
  int well_rounded;
  double volume;
  int has_index;
  int64_t index;
} wt_summary;

/* ambient may be NULL; has_index is set iff it is not. */
WT_API wt_status wt_lattice_summary(const wt_lattice* lattice, const wt_lattice* ambient,
                                    wt_summary* out);

/* Closest lattice point; coefficients receives rank() entries, point
 * dimension() entries. Either output may be NULL. */
WT_API wt_status wt_closest_vector(const wt_lattice* lattice, const double* target,
                                   double* point, int64_t* coefficients);

/* ---- theta series ------------------------------------------------------ */

typedef struct wt_theta_value {
  double value;
  double truncation_bound;
} wt_theta_value;

/* Theta series at q = exp(-pi tau), truncation error <= tol. */
WT_API wt_status wt_theta_exact(const wt_lattice* lattice, double tau, double tol,
                                wt_theta_value* out);
/* Volume/minimal-norm approximation (truncation_bound is 0). */
WT_API wt_status wt_theta_approx(const wt_lattice* lattice, double tau, wt_theta_value* out);
WT_API wt_status wt_theta_approx_params(int n, double volume, double minimal_norm,
                                        double tau, wt_theta_value* out);

typedef enum wt_closed_form { WT_CLOSED_FORM_ZN = 0, WT_CLOSED_FORM_D4 = 1 } wt_closed_form;

WT_API wt_status wt_theta_closed_form(wt_closed_form family, int n, double q, double* out);
WT_API wt_status wt_incomplete_gamma_upper(double s, double x, double* out);

/* ---- flatness factor --------------------------------------------------- */

typedef enum wt_representation { WT_PRIMAL = 0, WT_DUAL = 1 } wt_representation;

typedef struct wt_flatness_value {
  double epsilon;
  double truncation_bound;
  wt_representation representation;
  int clamped;
} wt_flatness_value;

WT_API wt_status wt_flatness(const wt_lattice* lattice, double sigma, double tol,
                             wt_flatness_value* out);
/* Forces one representation. */
WT_API wt_status wt_flatness_in(const wt_lattice* lattice, double sigma, double tol,
                                wt_representation representation, wt_flatness_value* out);

/* ---- fading and Monte Carlo -------------------------------------------- */

typedef enum wt_fading_kind {
  WT_FADING_DETERMINISTIC = 0,
  WT_FADING_RAYLEIGH_DIAGONAL = 1,
  WT_FADING_GAUSSIAN_MIMO = 2
} wt_fading_kind;

typedef struct wt_fading_model {
  wt_fading_kind kind;
  int m;            /* output dimension (MIMO, deterministic) */
  int n;            /* input dimension */
  double scale;     /* Rayleigh scale or MIMO entry deviation */
  const double* h;  /* deterministic only: m*n entries, column-major */
} wt_fading_model;

typedef enum wt_estimator { WT_ESTIMATOR_EXACT = 0, WT_ESTIMATOR_PROP1 = 1 } wt_estimator;

typedef struct wt_mc_options {
  int64_t trials;
  uint64_t seed;
  int workers;
  double tol;
  wt_estimator estimator;
} wt_mc_options;

/* trials 10000, seed 42, one worker, tol 1e-8, exact estimator. */
WT_API wt_mc_options wt_mc_options_default(void);

typedef struct wt_mc_estimate {
  double mean;
  double std_error;
  int64_t trials;
  uint64_t seed;
  int64_t resampled_fades;
  int64_t clamped_trials;
} wt_mc_estimate;

WT_API wt_status wt_avg_flatness(const wt_lattice* lattice, const wt_fading_model* model,
                                 double sigma, const wt_mc_options* options,
                                 wt_mc_estimate* out);
/* count sigma values sharing the fades of each trial. */
WT_API wt_status wt_avg_flatness_curve(const wt_lattice* lattice, const wt_fading_model* model,
                                       const double* sigmas, size_t count,
                                       const wt_mc_options* options, wt_mc_estimate* out);
WT_API wt_status wt_avg_flatness_effective(const wt_lattice* lattice,
                                           const wt_fading_model* model, double sigma,
                                           double sigma_s, const wt_mc_options* options,
                                           wt_mc_estimate* out);

/* ---- coset codes ------------------------------------------------------- */

WT_API wt_status wt_coset_code_create(const wt_lattice* fine, const wt_lattice* coarse,
                                      wt_coset_code** out);
WT_API void wt_coset_code_free(wt_coset_code* code);
WT_API int64_t wt_coset_code_size(const wt_coset_code* code);
/* dimension() entries. */
WT_API wt_status wt_coset_code_representative(const wt_coset_code* code, int64_t message,
                                              double* out);

typedef enum wt_encoder_kind { WT_ENCODER_GAUSSIAN = 0, WT_ENCODER_MOD_SHAPING = 1 } wt_encoder_kind;

typedef struct wt_encoder {
  wt_encoder_kind kind;
  double sigma_s;              /* Gaussian */
  const wt_lattice* shaping;   /* mod shaping: Lambda_s nested in the coarse lattice */
} wt_encoder;

/* Draws one transmitted vector for a message from stream (seed, trial). */
WT_API wt_status wt_encode(const wt_coset_code* code, const wt_encoder* encoder,
                           int64_t message, uint64_t seed, uint64_t trial, double* out);

WT_API wt_status wt_simulate_eve(const wt_coset_code* code, const wt_fading_model* model,
                                 double sigma, const wt_encoder* encoder,
                                 const wt_mc_options* options, wt_mc_estimate* out);

/* ---- bounds ------------------------------------------------------------ */

WT_API wt_status wt_eve_prob_bound(int64_t index, double avg_eps, double* out);
WT_API wt_status wt_mod_lambda_info_bound(double avg_eps, int64_t message_count, double* out);
WT_API wt_status wt_gaussian_info_bound(double avg_eps, int64_t message_count, double* out);

typedef struct wt_bound_report {
  int64_t index;
  double sigma;
  int has_sigma_s;
  double sigma_s;
  wt_mc_estimate avg_eps;
  int has_avg_eps_effective;
  wt_mc_estimate avg_eps_effective;
  double prob_bound;
  int mod_lambda_valid;
  double mod_lambda_info_nats;
  int gaussian_valid;
  double gaussian_info_nats;
} wt_bound_report;

/* sigma_s <= 0 means absent. */
WT_API wt_status wt_bound_report_run(const wt_coset_code* code, const wt_fading_model* model,
                                     double sigma, double sigma_s,
                                     const wt_mc_options* options, wt_bound_report* out);

#ifdef __cplusplus
}
#endif

#endif /* WIRETAP_WIRETAP_H */
