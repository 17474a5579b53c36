/*
 * regimetest — squeeze-duration based surrogate testing of GBM and binary
 * regime-switching GBM models for equispaced price series.
 *
 * C interface of the shared library. All objects are opaque handles owned
 * by the library; every fallible call returns an rt_status and leaves a
 * thread-local message retrievable through rt_last_error(). Handles are not
 * thread-safe individually, but independent handles may be used from
 * independent threads. The library parallelizes internally; the
 * REGIMETEST_THREADS environment variable caps the worker count and results
 * are identical for any value of it.
 */

#ifndef REGIMETEST_H
#define REGIMETEST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RT_API __declspec(dllexport)
#else
#define RT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rt_status {
    RT_OK = 0,
    RT_ERR_ARG = 1,        /* null handle or violated precondition */
    RT_ERR_INPUT = 2,      /* unreadable/malformed file, bad config value */
    RT_ERR_INFERENCE = 3,  /* inadmissible model, redraw budget, step cap */
    RT_ERR_DEGENERATE = 4, /* statistic undefined on the data */
    RT_ERR_IO = 5,         /* failed writing an output artifact */
    RT_ERR_INTERNAL = 9
} rt_status;

typedef enum rt_hypothesis {
    RT_HYP_GBM = 0,
    RT_HYP_MMGBM = 1,
    RT_HYP_SMGBM = 2
} rt_hypothesis;

typedef struct rt_config rt_config;     /* run configuration */
typedef struct rt_series rt_series;     /* equispaced price series */
typedef struct rt_stats rt_stats;       /* observed statistic record */
typedef struct rt_report rt_report;     /* composite test report */
typedef struct rt_estimate rt_estimate; /* grid objective report */

RT_API const char* rt_version(void);
RT_API const char* rt_status_name(rt_status status);
/* Message for the most recent failure on this thread; empty after success. */
RT_API const char* rt_last_error(void);

/* ---- configuration ----------------------------------------------------- */

/* Fresh config with the defaults: dt=5/(250*360), p=0.15, window=20, r=4,
 * B=200, seed=42, redraw_limit=20, step_cap=0.1, unit_scale=1/250,
 * grid=5:15:0.5, shape_grid=1,2,3, gap_policy=none, out_dir=. */
RT_API rt_config* rt_config_new(void);
RT_API void rt_config_free(rt_config* config);
/* Keys are the names above; grids accept "lo:hi:step" or comma lists. */
RT_API rt_status rt_config_set(rt_config* config, const char* key, const char* value);
RT_API rt_status rt_config_get(const rt_config* config, const char* key, char* buffer,
                               size_t length);
/* Flat "key = value" file; '#' starts a comment. */
RT_API rt_status rt_config_load(rt_config* config, const char* path);

/* ---- series ------------------------------------------------------------ */

/* Delimited text with a header naming `timestamp` and `price` columns. */
RT_API rt_status rt_series_load(const rt_config* config, const char* path,
                                rt_series** out);
RT_API rt_status rt_series_from_prices(const double* prices, size_t count, double dt,
                                       rt_series** out);
RT_API void rt_series_free(rt_series* series);
RT_API size_t rt_series_length(const rt_series* series);
RT_API double rt_series_dt(const rt_series* series);
RT_API double rt_series_price(const rt_series* series, size_t index);
RT_API size_t rt_series_gap_count(const rt_series* series);
RT_API size_t rt_series_warning_count(const rt_series* series);
/* Borrowed pointer, valid while the series lives. NULL if out of range. */
RT_API const char* rt_series_warning(const rt_series* series, size_t index);
/* Full-precision `timestamp,price` dump; loads back bit-identically. */
RT_API rt_status rt_series_dump(const rt_series* series, const char* path);

/* ---- simulators -------------------------------------------------------- */

/* x0: 0 draws the initial regime from the stationary law, 1/2 fix it. */
RT_API rt_status rt_simulate_gbm(double mu, double sigma, size_t n_steps, double dt,
                                 double s0, uint64_t seed, rt_series** out);
RT_API rt_status rt_simulate_mmgbm(double mu1, double sigma1, double lambda1,
                                   double mu2, double sigma2, double lambda2, int x0,
                                   size_t n_steps, double dt, double s0, uint64_t seed,
                                   rt_series** out);
RT_API rt_status rt_simulate_smgbm(double mu1, double sigma1, double shape1,
                                   double rate1, double mu2, double sigma2,
                                   double shape2, double rate2, int x0, size_t n_steps,
                                   double dt, double s0, uint64_t seed,
                                   rt_series** out);

/* ---- observed statistics ------------------------------------------------ */

RT_API rt_status rt_stats_run(const rt_series* series, const rt_config* config,
                              rt_stats** out);
RT_API void rt_stats_free(rt_stats* stats);
/* Number of completed squeeze episodes (L). */
RT_API long long rt_stats_count(const rt_stats* stats);
/* Number of statistic components defined for the data (<= 4). */
RT_API int rt_stats_dim(const rt_stats* stats);
/* Component j, 1-based; NaN outside 1..rt_stats_dim(). */
RT_API double rt_stats_t(const rt_stats* stats, int j);
RT_API double rt_stats_threshold(const rt_stats* stats);
/* Two-line header + aligned row, two decimals, "--" for absent components. */
RT_API rt_status rt_stats_format(const rt_stats* stats, const char* id, char* buffer,
                                 size_t length);
/* Writes <out_dir>/<id>_stats.txt. */
RT_API rt_status rt_stats_write(const rt_stats* stats, const char* id,
                                const char* out_dir);

/* ---- composite surrogate test ------------------------------------------ */

RT_API rt_status rt_test_run(const rt_series* series, const rt_config* config,
                             rt_hypothesis hypothesis, rt_report** out);
RT_API void rt_report_free(rt_report* report);
RT_API int rt_report_rows(const rt_report* report);
RT_API int rt_report_dim(const rt_report* report); /* r */
RT_API const char* rt_report_label(const rt_report* report, int row);
/* Per-theta and composite alpha values; j is 1-based. NaN out of range. */
RT_API double rt_report_alpha(const rt_report* report, int row, int j);
RT_API double rt_report_composite(const rt_report* report, int j);
RT_API double rt_report_observed_t(const rt_report* report, int j);
/* The composite row in table form, three decimals. */
RT_API rt_status rt_report_format(const rt_report* report, const char* id,
                                  char* buffer, size_t length);
/* Writes <out_dir>/<id>_<hyp>_alpha.txt and ..._report.json. */
RT_API rt_status rt_report_write(const rt_report* report, const char* id,
                                 const char* out_dir);

/* ---- plot data, grid objective, path dump ------------------------------- */

RT_API rt_status rt_plotdata_write(const rt_series* series, const rt_config* config,
                                   rt_hypothesis hypothesis, const char* id,
                                   const char* out_dir);

RT_API rt_status rt_estimate_run(const rt_series* series, const rt_config* config,
                                 rt_hypothesis hypothesis, rt_estimate** out);
RT_API void rt_estimate_free(rt_estimate* estimate);
RT_API int rt_estimate_rows(const rt_estimate* estimate);
RT_API const char* rt_estimate_label(const rt_estimate* estimate, int row);
RT_API double rt_estimate_objective(const rt_estimate* estimate, int row);
RT_API int rt_estimate_argmin(const rt_estimate* estimate);
RT_API rt_status rt_estimate_write(const rt_estimate* estimate, const char* id,
                                   const char* out_dir);

/* One surrogate path for the admissible model at (sojourn, shape), written
 * as timestamp,price[,state[,age]]; shape is ignored except for SMGBM and
 * sojourn except for the modulated hypotheses. */
RT_API rt_status rt_surrogate_dump(const rt_series* series, const rt_config* config,
                                   rt_hypothesis hypothesis, double sojourn,
                                   double shape, uint64_t replication,
                                   const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* REGIMETEST_H */
