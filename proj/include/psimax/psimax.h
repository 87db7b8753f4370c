#ifndef PSIMAX_PSIMAX_H
#define PSIMAX_PSIMAX_H

/*
 * C interface to the psimax library: maximum angular separation of
 * base-station bearings, GDOP, hull membership, the closed-form gap laws
 * and the Poisson network Monte Carlo.
 *
 * Every function returns a psimax_status. On failure the out-parameters are
 * left untouched and psimax_last_error_message() describes the problem for
 * the calling thread. Angles are radians.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(PSIMAX_BUILDING_LIBRARY)
#define PSIMAX_API __attribute__((visibility("default")))
#else
#define PSIMAX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum psimax_status {
  PSIMAX_OK = 0,
  PSIMAX_ERR_INVALID_ARGUMENT = 1,
  PSIMAX_ERR_DEGENERATE_INPUT = 2,
  PSIMAX_ERR_INSUFFICIENT_GEOMETRY = 3,
  PSIMAX_ERR_DOMAIN = 4,
  PSIMAX_ERR_UNDEFINED_CONDITIONAL = 5,
  PSIMAX_ERR_UNDEFINED_CORRELATION = 6,
  PSIMAX_ERR_IO = 7,
  PSIMAX_ERR_CONFIG = 8,
  PSIMAX_ERR_SCHEMA = 9,
  PSIMAX_ERR_INTERNAL = 100
} psimax_status;

PSIMAX_API const char* psimax_status_string(psimax_status status);
/* Message of the last failed call on this thread, "" if none. */
PSIMAX_API const char* psimax_last_error_message(void);
PSIMAX_API const char* psimax_version(void);

/* Parses "1.5", "pi", "pi/4", "3*pi/4". */
PSIMAX_API psimax_status psimax_parse_angle(const char* text, double* out);

/* ---- geometry (bearings need not be sorted) ---- */

/* Bearings of points (xy[2k], xy[2k+1]) as seen from the origin, in [0, 2pi). */
PSIMAX_API psimax_status psimax_bearings_from_points(const double* xy, size_t n_points,
                                                     double* bearings_out);
PSIMAX_API psimax_status psimax_psi_max(const double* bearings, size_t n, double* out);
PSIMAX_API psimax_status psimax_gdop_toa(const double* bearings, size_t n, double* out);
PSIMAX_API psimax_status psimax_gdop_toa_anglesum(const double* bearings, size_t n, double* out);
PSIMAX_API psimax_status psimax_gdop_bound(size_t count, double psi_max, double* out);
/* `reference` indexes the caller's bearings array. */
PSIMAX_API psimax_status psimax_gdop_tdoa(const double* bearings, size_t n, size_t reference,
                                          double* out);
PSIMAX_API psimax_status psimax_crlb_from_gdop(double gdop, double sigma_r, double* out);
PSIMAX_API psimax_status psimax_inside_convex_hull(const double* bearings, size_t n, int* inside,
                                                   int* degenerate);

/* ---- closed-form laws ---- */

PSIMAX_API psimax_status psimax_stevens_cdf(size_t count, double phi, double* out);
/* pmf[L] = P(N = L) for L < pmf_len. truncation_bound may be NULL. */
PSIMAX_API psimax_status psimax_weighted_cdf(double phi, const double* pmf, size_t pmf_len,
                                             size_t l_min, double* out, double* truncation_bound);

typedef struct psimax_expected_bs {
  double value;
  int used_oracle;  /* 1 when value comes from the stopping-time simulation */
  int warning;
  double analytic;  /* NaN when not evaluable */
  double oracle;    /* NaN when the oracle did not run */
  double oracle_std_error;
} psimax_expected_bs;

/* oracle_runs = 0 skips the Monte Carlo gate. */
PSIMAX_API psimax_status psimax_expected_bs_for_target(double phi, size_t oracle_runs,
                                                       uint64_t oracle_seed,
                                                       psimax_expected_bs* out);

/* ---- statistics ---- */

PSIMAX_API psimax_status psimax_spearman(const double* x, const double* y, size_t n, double* out);
/* excluded (may be NULL) receives the number of pairs dropped as non-finite. */
PSIMAX_API psimax_status psimax_pearson(const double* x, const double* y, size_t n,
                                        int log_transform_y, double* out, size_t* excluded);
/* Two-sample KS distance between the empirical CDFs of a and b. */
PSIMAX_API psimax_status psimax_ks_two_sample(const double* a, size_t na, const double* b,
                                              size_t nb, double* out);
PSIMAX_API psimax_status psimax_quantile(const double* values, size_t n, double p, double* out);

/* ---- network model ---- */

typedef enum psimax_candidates {
  PSIMAX_CANDIDATES_ALL = 0,
  PSIMAX_CANDIDATES_ACTIVE = 1
} psimax_candidates;

typedef struct psimax_network_params {
  double lambda;
  double load;
  double alpha;
  double beta_over_gamma_db;
  double sigma_s_db;
  double sigma2;
  double tx_power;
  double window_radius;
  uint64_t seed;
  psimax_candidates candidates;
} psimax_network_params;

PSIMAX_API void psimax_network_params_default(psimax_network_params* params);
PSIMAX_API psimax_status psimax_shadowing_transformed_density(const psimax_network_params* params,
                                                              double* out);

typedef struct psimax_scenario psimax_scenario;

PSIMAX_API psimax_status psimax_scenario_sample(const psimax_network_params* params,
                                                uint64_t scenario_id, psimax_scenario** out);
PSIMAX_API void psimax_scenario_destroy(psimax_scenario* scenario);
PSIMAX_API size_t psimax_scenario_size(const psimax_scenario* scenario);
PSIMAX_API size_t psimax_scenario_hearable_count(const psimax_scenario* scenario);
/* Hearable BS indices, strongest SINR first. Writes min(capacity, count). */
PSIMAX_API size_t psimax_scenario_hearable(const psimax_scenario* scenario, size_t* out,
                                           size_t capacity);
PSIMAX_API psimax_status psimax_scenario_bs(const psimax_scenario* scenario, size_t index,
                                            double* x, double* y, double* shadowing, int* active);
PSIMAX_API psimax_status psimax_scenario_sinr(const psimax_scenario* scenario, size_t index,
                                              double* out);

/* pmf_out receives P(N = L) for L < capacity; *len_out the full table length. */
PSIMAX_API psimax_status psimax_empirical_hearability(const psimax_network_params* params,
                                                      size_t n_scenarios, unsigned threads,
                                                      double* pmf_out, size_t capacity,
                                                      size_t* len_out);

/* ---- experiments ---- */

typedef struct psimax_experiment psimax_experiment;

PSIMAX_API psimax_status psimax_experiment_create(psimax_experiment** out);
PSIMAX_API void psimax_experiment_destroy(psimax_experiment* experiment);
/* Reads key = value settings on top of the current ones. */
PSIMAX_API psimax_status psimax_experiment_load_config(psimax_experiment* experiment,
                                                       const char* path);
PSIMAX_API psimax_status psimax_experiment_set(psimax_experiment* experiment, const char* key,
                                               const char* value);
/* Writes results.csv, summary.csv and curves.csv into the output directory. */
PSIMAX_API psimax_status psimax_experiment_simulate(psimax_experiment* experiment);
/* results_path may be NULL to simulate inline. */
PSIMAX_API psimax_status psimax_experiment_correlate(psimax_experiment* experiment,
                                                     const char* results_path);
PSIMAX_API psimax_status psimax_experiment_hull_split(psimax_experiment* experiment,
                                                      const char* results_path);
PSIMAX_API psimax_status psimax_experiment_analytic(psimax_experiment* experiment);
/* Human-readable report of the last run; valid until the next call on the handle. */
PSIMAX_API const char* psimax_experiment_report(const psimax_experiment* experiment);

#ifdef __cplusplus
}
#endif

#endif
