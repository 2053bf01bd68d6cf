#ifndef ODDSINV_ODDSINV_H
#define ODDSINV_ODDSINV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ODDSINV_BUILDING_LIBRARY)
#    define ODDSINV_API __declspec(dllexport)
#  else
#    define ODDSINV_API __declspec(dllimport)
#  endif
#else
#  define ODDSINV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns a status. On failure the message is kept per thread
 * and available from oddsinv_last_error() until the next failing call. */
typedef enum oddsinv_status {
  ODDSINV_OK = 0,
  ODDSINV_E_INVALID_ARGUMENT = 1,
  ODDSINV_E_PARTITION_MISMATCH = 2,
  ODDSINV_E_DOMAIN = 3,
  ODDSINV_E_DEGENERATE = 4,
  ODDSINV_E_POLE = 5,
  ODDSINV_E_UNRELIABLE = 6,
  ODDSINV_E_CONFIG = 7,
  ODDSINV_E_IO = 8,
  ODDSINV_E_INTERNAL = 9
} oddsinv_status;

typedef enum oddsinv_scheme {
  ODDSINV_SCHEME_UNCONSTRAINED = 0,
  ODDSINV_SCHEME_CONSTRAINED = 1,
  ODDSINV_SCHEME_DOUBLE = 2
} oddsinv_scheme;

typedef enum oddsinv_prior_kind {
  ODDSINV_PRIOR_DIRICHLET = 0,
  ODDSINV_PRIOR_DEPENDENT = 1
} oddsinv_prior_kind;

typedef struct oddsinv_partition oddsinv_partition;
typedef struct oddsinv_contrast oddsinv_contrast;
typedef struct oddsinv_rng oddsinv_rng;
typedef struct oddsinv_sample oddsinv_sample;
typedef struct oddsinv_config oddsinv_config;
typedef struct oddsinv_report oddsinv_report;

typedef struct oddsinv_ks_result {
  double statistic;
  double n1;
  double n2;
  double threshold;
  int significant_at_01;
} oddsinv_ks_result;

ODDSINV_API const char* oddsinv_version(void);
ODDSINV_API const char* oddsinv_last_error(void);
ODDSINV_API const char* oddsinv_status_name(oddsinv_status status);
/* Releases strings returned through char** out-parameters. */
ODDSINV_API void oddsinv_string_free(char* s);

/* Partitions. block_of[i] is the 0-based block of cell i; blocks must be
 * numbered 0..k-1 with none empty. */
ODDSINV_API oddsinv_status oddsinv_partition_create(size_t cells, const size_t* block_of,
                                                    oddsinv_partition** out);
ODDSINV_API oddsinv_status oddsinv_partition_rows(size_t rows, size_t cols, oddsinv_partition** out);
ODDSINV_API oddsinv_status oddsinv_partition_columns(size_t rows, size_t cols,
                                                     oddsinv_partition** out);
ODDSINV_API void oddsinv_partition_destroy(oddsinv_partition* p);
ODDSINV_API size_t oddsinv_partition_cell_count(const oddsinv_partition* p);
ODDSINV_API size_t oddsinv_partition_block_count(const oddsinv_partition* p);
/* out receives block_count sums. */
ODDSINV_API oddsinv_status oddsinv_partition_sums(const oddsinv_partition* p, const uint64_t* x,
                                                  size_t cells, uint64_t* out);

/* Contrasts: an r x d matrix stored column-major. */
ODDSINV_API oddsinv_status oddsinv_contrast_create(size_t rows, size_t cols,
                                                   const double* column_major,
                                                   oddsinv_contrast** out);
ODDSINV_API oddsinv_status oddsinv_contrast_odds_ratio_2x2(oddsinv_contrast** out);
ODDSINV_API oddsinv_status oddsinv_contrast_local(size_t rows, size_t cols, size_t i, size_t j,
                                                  oddsinv_contrast** out);
ODDSINV_API oddsinv_status oddsinv_contrast_higher_order(size_t k, oddsinv_contrast** out);
ODDSINV_API void oddsinv_contrast_destroy(oddsinv_contrast* c);
ODDSINV_API size_t oddsinv_contrast_rows(const oddsinv_contrast* c);
ODDSINV_API size_t oddsinv_contrast_cols(const oddsinv_contrast* c);

/* Invariance checks. Results are 0 or 1. */
ODDSINV_API oddsinv_status oddsinv_margin_free(const oddsinv_contrast* c,
                                               const oddsinv_partition* p, int* out);
ODDSINV_API oddsinv_status oddsinv_margin_free_column(const oddsinv_contrast* c,
                                                      const oddsinv_partition* p, size_t j,
                                                      int* out);
ODDSINV_API oddsinv_status oddsinv_sample_size_condition(const oddsinv_contrast* c,
                                                         const oddsinv_partition* p, size_t j,
                                                         uint64_t n, int* out);

/* out receives one log generalized odds ratio per contrast column. */
ODDSINV_API oddsinv_status oddsinv_log_godds(const double* theta, size_t cells,
                                             const oddsinv_contrast* c, double* out);

ODDSINV_API oddsinv_status oddsinv_lgamma(double re, double im, double* out_re, double* out_im);

/* Closed-form CF of log psi_j under the Dirichlet(alpha) prior. */
ODDSINV_API oddsinv_status oddsinv_cf_logpsi(double t, const double* alpha, const uint64_t* x,
                                             size_t cells, const oddsinv_contrast* c, size_t j,
                                             const oddsinv_partition* p, oddsinv_scheme scheme,
                                             double* out_re, double* out_im);
/* Closed-form CF of the log odds ratio for the dependent 2x2 prior (4 cells). */
ODDSINV_API oddsinv_status oddsinv_cf_dependent(double t, const double* alpha, const uint64_t* x,
                                                oddsinv_scheme scheme, double* out_re,
                                                double* out_im);

ODDSINV_API oddsinv_status oddsinv_fnch_log_pmf(uint64_t a, uint64_t n1, uint64_t n2, uint64_t m1,
                                                double psi, double* out);

/* Random streams. */
ODDSINV_API oddsinv_status oddsinv_rng_create(uint64_t seed, uint64_t stream, oddsinv_rng** out);
ODDSINV_API void oddsinv_rng_destroy(oddsinv_rng* rng);
ODDSINV_API oddsinv_status oddsinv_rng_uniform(oddsinv_rng* rng, double* out);

/* Posterior draws of log psi, one weighted column per contrast column. The
 * double scheme needs a 2x2 table with the odds-ratio contrast; p may be NULL
 * for the unconstrained scheme. */
ODDSINV_API oddsinv_status oddsinv_sample_posterior(oddsinv_scheme scheme, const double* alpha,
                                                    const uint64_t* x, size_t cells,
                                                    const oddsinv_partition* p,
                                                    const oddsinv_contrast* c, size_t draws,
                                                    oddsinv_rng* rng, oddsinv_sample** out);
ODDSINV_API oddsinv_status oddsinv_sample_dependent(const double* alpha, const uint64_t* x,
                                                    oddsinv_scheme scheme, size_t draws,
                                                    oddsinv_rng* rng, oddsinv_sample** out);
ODDSINV_API void oddsinv_sample_destroy(oddsinv_sample* s);
ODDSINV_API size_t oddsinv_sample_columns(const oddsinv_sample* s);
ODDSINV_API size_t oddsinv_sample_size(const oddsinv_sample* s);
/* Copies column j into out, which must hold oddsinv_sample_size(s) values. */
ODDSINV_API oddsinv_status oddsinv_sample_values(const oddsinv_sample* s, size_t j, double* out);
ODDSINV_API oddsinv_status oddsinv_sample_weights(const oddsinv_sample* s, size_t j, double* out);
ODDSINV_API oddsinv_status oddsinv_sample_ess(const oddsinv_sample* s, size_t j, double* out);
ODDSINV_API oddsinv_status oddsinv_sample_degenerate(const oddsinv_sample* s, size_t j, int* out);

ODDSINV_API oddsinv_status oddsinv_ks_two_sample(const double* a, size_t na, const double* b,
                                                 size_t nb, oddsinv_ks_result* out);
ODDSINV_API oddsinv_status oddsinv_ks_weighted(const oddsinv_sample* a, size_t ja,
                                               const oddsinv_sample* b, size_t jb,
                                               oddsinv_ks_result* out);

/* Experiment configs. Setters take effect immediately; the config is checked
 * again when a command runs. */
ODDSINV_API oddsinv_status oddsinv_config_load(const char* path, oddsinv_config** out);
ODDSINV_API oddsinv_status oddsinv_config_parse(const char* json_text, oddsinv_config** out);
ODDSINV_API void oddsinv_config_destroy(oddsinv_config* cfg);
ODDSINV_API oddsinv_status oddsinv_config_to_json(const oddsinv_config* cfg, char** out);
ODDSINV_API oddsinv_status oddsinv_config_validate(const oddsinv_config* cfg);
ODDSINV_API oddsinv_status oddsinv_config_set_seed(oddsinv_config* cfg, uint64_t seed);
ODDSINV_API oddsinv_status oddsinv_config_set_samples(oddsinv_config* cfg, size_t samples);
ODDSINV_API oddsinv_status oddsinv_config_set_t_grid(oddsinv_config* cfg, double tmin, double tmax,
                                                     size_t points);
ODDSINV_API oddsinv_status oddsinv_config_get_t_grid(const oddsinv_config* cfg, double* tmin,
                                                     double* tmax, size_t* points);
ODDSINV_API oddsinv_status oddsinv_config_set_out_dir(oddsinv_config* cfg, const char* dir);
ODDSINV_API oddsinv_status oddsinv_config_set_schemes(oddsinv_config* cfg,
                                                      const oddsinv_scheme* schemes, size_t count);
ODDSINV_API oddsinv_status oddsinv_config_set_prior_kind(oddsinv_config* cfg,
                                                         oddsinv_prior_kind kind);

/* Runs "invariance", "cf", "figure", "analyze" or "concentration". */
ODDSINV_API oddsinv_status oddsinv_run(const char* command, const oddsinv_config* cfg,
                                       oddsinv_report** out);
ODDSINV_API void oddsinv_report_destroy(oddsinv_report* r);
/* 0 success or invariant, 2 non-invariant finding. */
ODDSINV_API int oddsinv_report_exit_code(const oddsinv_report* r);
ODDSINV_API const char* oddsinv_report_text(const oddsinv_report* r);
ODDSINV_API size_t oddsinv_report_file_count(const oddsinv_report* r);
ODDSINV_API const char* oddsinv_report_file(const oddsinv_report* r, size_t i);

#ifdef __cplusplus
}
#endif

#endif
