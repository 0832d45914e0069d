/* SPDX-License-Identifier: Apache-2.0
 *
 * C API of the mvstop shared library. Experiments are configured by a JSON
 * document (see README for the schema), run behind an opaque handle, and
 * write deterministic CSV/Markdown outputs. All functions return a status
 * code; mvstop_last_error() / mvstop_run_last_error() carry the detail text
 * of the most recent failure.
 */
#ifndef MVSTOP_H
#define MVSTOP_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mvstop_status {
    MVSTOP_OK = 0,
    MVSTOP_ERR_INVALID_ARGUMENT = 1,
    MVSTOP_ERR_CONFIG = 2,
    MVSTOP_ERR_NUMERIC = 3,
    MVSTOP_ERR_IO = 4,
    MVSTOP_ERR_INTERNAL = 5
} mvstop_status;

const char* mvstop_version(void);
const char* mvstop_status_name(mvstop_status status);

/* Thread-local message of the last failed call in this thread. */
const char* mvstop_last_error(void);

/* ---- experiment runner (opaque handle) ---- */

typedef struct mvstop_run mvstop_run;

/* Built-in benchmark defaults as a JSON document (static storage). */
const char* mvstop_default_config(void);

/* config_json may be NULL or empty for the built-in benchmark defaults. */
mvstop_status mvstop_run_create(const char* config_json, mvstop_run** out_run);
void mvstop_run_destroy(mvstop_run* run);
const char* mvstop_run_last_error(const mvstop_run* run);

/* One-line human summary of the last completed subcommand. */
const char* mvstop_run_summary(const mvstop_run* run);

/* Writes table.csv / table.md under out_dir. */
mvstop_status mvstop_run_table(mvstop_run* run, const char* out_dir);
/* Writes rates_points.csv / rates_summary.csv under out_dir. */
mvstop_status mvstop_run_rates(mvstop_run* run, const char* out_dir);
/* Writes pertlab_pinv.csv / pertlab_concentration.csv under out_dir. */
mvstop_status mvstop_run_pertlab(mvstop_run* run, const char* out_dir);
/* Writes oracle.csv under out_dir; *out_v0 (optional) receives V*_0. */
mvstop_status mvstop_run_oracle(mvstop_run* run, const char* out_dir, double* out_v0);

/* ---- direct numeric entry points ---- */

/* Conditional mean/variance of the benchmark limit process over [s, t]. */
mvstop_status mvstop_sy_moments(double a, double sigma, double x0, double s, double t,
                                double xs, double* out_mean, double* out_var);

/* Hermite function value psi_order(x). */
mvstop_status mvstop_hermite_eval(int order, double x, double* out_value);

/* Clip value to [-level, level]; level must be >= 0. */
mvstop_status mvstop_truncate(double value, double level, double* out_value);

/* Perturbation constants c1, c2 for the given spectrum window. */
mvstop_status mvstop_perturbation_constants(double lambda_min, double lambda_max,
                                            double epsilon, double rho, double* out_c1,
                                            double* out_c2);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MVSTOP_H */
