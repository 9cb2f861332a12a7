/*
 * overlap — nonparametric estimation of the Pianka and MacArthur-Levins
 * overlap measures between two univariate samples, with asymptotic variances,
 * confidence intervals, and a seeded Monte Carlo engine for the sampling
 * distribution of the scaled estimators.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * and a thread-local textual error. All handles are created and released by
 * this API; strings returned as char* are heap-allocated and must be released
 * with ovl_string_free().
 */
#ifndef OVERLAP_OVERLAP_H
#define OVERLAP_OVERLAP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. The nonzero values deliberately match the CLI exit-code
 * convention: 2 = input/validation problem, 3 = numerical degeneracy. */
typedef enum ovl_status {
  OVL_OK = 0,
  OVL_E_VALIDATION = 2,
  OVL_E_DEGENERATE = 3,
  OVL_E_NOMEM = 4,
  OVL_E_INTERNAL = 5
} ovl_status;

/* ABI version of this header/library pairing (currently 1). */
int ovl_abi_version(void);

/* Explanation of the most recent failure on the calling thread; empty string
 * if none. The pointer stays valid until the next failing call on the same
 * thread. */
const char* ovl_last_error(void);

/* ---------------------------------------------------------------- analysis */

typedef struct ovl_config ovl_config;

/* A fresh configuration with the defaults: epanechnikov kernel, bandwidth
 * rule "two_thirds" (h = 4.2/n^(2/3)), automatic support, 1001-point grid,
 * 0.95 confidence level. Returns NULL on allocation failure. */
ovl_config* ovl_config_new(void);
void ovl_config_free(ovl_config* cfg);

/* Kernel by name: epanechnikov | triangular | biweight | box. */
ovl_status ovl_config_set_kernel(ovl_config* cfg, const char* name);

/* Bandwidth rule:
 *   "two_thirds"            h = 4.2/n^(2/3)            (p1, p2 ignored)
 *   "root_log"            h = sqrt(log n)/(0.45 n^(2/3))
 *   "power"                h = n^(-p1), p1 in (1/3, 1)
 *   "scaled_log"           h = sqrt(log n)/(p1 * n^p2)
 *   "fixed"                h = p1
 */
ovl_status ovl_config_set_bandwidth(ovl_config* cfg, const char* rule, double p1, double p2);

/* Support policies: automatic (union of per-sample data ranges padded by
 * h*half_width), an explicit interval, or pooled empirical quantiles
 * [1-q, q]. */
ovl_status ovl_config_set_support_auto(ovl_config* cfg);
ovl_status ovl_config_set_support_explicit(ovl_config* cfg, double lo, double hi);
ovl_status ovl_config_set_support_quantile(ovl_config* cfg, double q);

ovl_status ovl_config_set_grid(ovl_config* cfg, int m);        /* odd, >= 3 */
ovl_status ovl_config_set_level(ovl_config* cfg, double level); /* in (0,1) */

typedef struct ovl_report ovl_report;

/* Runs the full pipeline on two samples. On failure returns NULL, stores the
 * code in *status (if non-NULL), and sets ovl_last_error(). */
ovl_report* ovl_estimate(const ovl_config* cfg, const double* x, size_t nx, const double* y,
                         size_t ny, ovl_status* status);
void ovl_report_free(ovl_report* rep);

/* The whole report as JSON (top-level "schema": 1). */
char* ovl_report_json(const ovl_report* rep);

/* Scalar fields by key:
 *   "pianka", "pianka_variance", "pianka_se", "pianka_ci_lo", "pianka_ci_hi",
 *   "ml_fg", "ml_fg_variance", "ml_fg_variance_as_printed",
 *   "ml_gf", "ml_gf_variance", "ml_gf_variance_as_printed",
 *   "h", "k02", "n_common", "support_lo", "support_hi", "level", "z"
 * ml_fg is the MacArthur-Levins measure with the first sample's norm in the
 * denominator; ml_gf is the reversed orientation. Values may be NaN when the
 * report flags them (see warnings). */
ovl_status ovl_report_value(const ovl_report* rep, const char* key, double* out);

size_t ovl_report_warning_count(const ovl_report* rep);
const char* ovl_report_warning(const ovl_report* rep, size_t i); /* NULL if out of range */

/* -------------------------------------------------------------- simulation */

typedef struct ovl_sim ovl_sim;

/* Runs `reps` replications of the scaled statistic sqrt(n h)(measure_n -
 * measure) under a built-in scenario:
 *   scenario: "case_I"  (truncated normal(1,4^2) vs normal(5,4.5^2))
 *             "case_II" (truncated normal(5,4^2) vs logistic(0,3))
 *   measure:  "pianka" | "macarthur_levins"
 * Bandwidth follows the simulation rule sqrt(log n)/(0.45 n^(2/3)). `threads`
 * = 0 uses hardware concurrency; results are bit-identical for every thread
 * count. Pass kernel = NULL and grid = 0 for the defaults (epanechnikov,
 * 1001). */
ovl_sim* ovl_simulate(const char* scenario, const char* measure, size_t n, size_t reps,
                      uint64_t seed, const char* kernel, int grid, unsigned threads,
                      ovl_status* status);
void ovl_sim_free(ovl_sim* sim);

size_t ovl_sim_count(const ovl_sim* sim);
double ovl_sim_value(const ovl_sim* sim, size_t i);
uint64_t ovl_sim_replicate_seed(const ovl_sim* sim, size_t i);

/* Scalars by key: "h", "true_measure", "sigma2_theory",
 * "sigma2_theory_as_printed" (MacArthur-Levins only), "empirical_variance",
 * "empirical_mean", "ks_stat", "ks_threshold_1pct", "support_lo",
 * "support_hi". */
ovl_status ovl_sim_stat(const ovl_sim* sim, const char* key, double* out);

/* Q-Q pairs (theoretical quantile of N(0, sigma2_theory), order statistic). */
size_t ovl_sim_qq_count(const ovl_sim* sim);
ovl_status ovl_sim_qq_pair(const ovl_sim* sim, size_t i, double* theoretical, double* empirical);

/* Histogram of the replication values, ceil(sqrt(reps)) equal-width bins. */
size_t ovl_sim_histogram_count(const ovl_sim* sim);
ovl_status ovl_sim_histogram_bin(const ovl_sim* sim, size_t i, double* lo, double* hi,
                                 size_t* count);

/* Experiment summary as JSON (top-level "schema": 1). */
char* ovl_sim_summary_json(const ovl_sim* sim);

/* ----------------------------------------------------------------- kernels */

/* JSON array of built-in kernels with their moment constants:
 * [{"name": "...", "k01": 1.0, "k11": 0.0, "k21": ..., "k02": ...}, ...] */
char* ovl_kernels_json(void);

void ovl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* OVERLAP_OVERLAP_H */
