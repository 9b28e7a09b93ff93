/* Topological anomaly detection for multivariate time series.
 *
 * C interface to the core library. All functions that can fail return a
 * tada_status; outputs come back through pointers. On failure the out
 * pointer is untouched and tada_last_error() (thread-local) describes what
 * went wrong. Handles are opaque and must be released with the matching
 * _free function; accessor pointers stay valid until the owning handle is
 * freed. Fitted models are immutable and safe to score from several
 * threads at once.
 *
 * TADA_THREADS caps internal parallelism (default: hardware concurrency).
 */

#ifndef TADA_H
#define TADA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tada_status {
  TADA_OK = 0,
  TADA_ERR_INVALID_ARGUMENT = 1,
  TADA_ERR_IO = 2,
  TADA_ERR_PARSE = 3,
  TADA_ERR_NONFINITE = 4,
  TADA_ERR_DIMENSION_MISMATCH = 5,
  TADA_ERR_TOO_FEW_SAMPLES = 6,
  TADA_ERR_ORDER_TOO_LARGE = 7,
  TADA_ERR_VERSION_MISMATCH = 8,
  TADA_ERR_CORRUPT_FILE = 9,
  TADA_ERR_DEGENERATE = 10,
  TADA_ERR_SIZE_LIMIT = 11,
  TADA_ERR_INTERNAL = 12
} tada_status;

const char* tada_version(void);
const char* tada_status_name(tada_status status);
/* Message of the last failure on this thread; empty string if none. */
const char* tada_last_error(void);

typedef struct tada_series tada_series;
typedef struct tada_model tada_model;
typedef struct tada_scores tada_scores;

/* ---- series ---------------------------------------------------------- */

/* values is row-major, length x channels. labels may be NULL; when given it
 * holds one 0/1 entry per timestamp. sample_rate 0 means unknown. */
tada_status tada_series_create(const double* values, int64_t length, int32_t channels,
                               const uint8_t* labels, double sample_rate, tada_series** out);

/* CSV with one row per timestamp. label_column NULL keeps the default
 * ("is_anomaly"); pass "" to treat every column as data. */
tada_status tada_series_load_csv(const char* path, const char* label_column, tada_series** out);
tada_status tada_series_save_csv(const tada_series* series, const char* path);

int64_t tada_series_length(const tada_series* series);
int32_t tada_series_channels(const tada_series* series);
/* NULL when the series carries no labels. */
const uint8_t* tada_series_labels(const tada_series* series);
void tada_series_free(tada_series* series);

/* ---- synthetic data -------------------------------------------------- */

typedef struct tada_wheels_spec {
  int32_t n_channels;    /* even, >= 8 */
  double sample_rate;    /* Hz */
  double duration_s;
  int64_t anomaly_len;   /* samples */
  int64_t anomaly_start; /* -1: drawn uniformly over valid starts */
  uint64_t seed;
  double ar2_peak_freq;  /* Hz */
  double ar2_modulus;    /* > 1 */
  double noise_std;
} tada_wheels_spec;

void tada_wheels_spec_defaults(tada_wheels_spec* spec);
/* Latent AR(2) factors mixed along a double-wheel dependency graph; one
 * labeled window where the graph gains an extra connection. */
tada_status tada_generate_wheels(const tada_wheels_spec* spec, tada_series** out);

typedef struct tada_ar1_spec {
  int32_t n_channels;
  int64_t length;
  double phi; /* |phi| < 1 */
  double noise_std;
  const int64_t* anomaly_positions; /* may be NULL when n_anomalies is 0 */
  const double* magnitudes;         /* one additive spike per position */
  int64_t n_anomalies;
  uint64_t seed;
} tada_ar1_spec;

void tada_ar1_spec_defaults(tada_ar1_spec* spec);
tada_status tada_generate_ar1(const tada_ar1_spec* spec, tada_series** out);

/* ---- fitting --------------------------------------------------------- */

enum { TADA_QUANTIZER_BATCH = 0, TADA_QUANTIZER_MINIBATCH = 1 };
enum { TADA_SPACING_DENSE = 0, TADA_SPACING_PAPER = 1 };
enum { TADA_ESTIMATOR_MCD = 0, TADA_ESTIMATOR_PLAIN = 1 };
enum { TADA_WEIGHT_CONSTANT = 0, TADA_WEIGHT_PERSISTENCE = 1 };
enum { TADA_K_PER_ORDER = 0, TADA_K_TOTAL = 1 };

typedef struct tada_fit_config {
  int64_t window_delta;
  int64_t window_stride;
  int32_t max_order; /* homology orders 0..max_order-1 */
  int32_t k;         /* centroid budget, interpreted per k_budget */
  int32_t k_budget;  /* TADA_K_PER_ORDER: k centroids for every order;
                        TADA_K_TOTAL: k split across the kept orders */
  double h;          /* contamination level in [0, 1) */
  int32_t n_start;
  uint64_t seed;
  int32_t quantizer;  /* TADA_QUANTIZER_* */
  int64_t minibatch_q; /* 0: auto */
  int32_t spacing;    /* TADA_SPACING_* */
  int32_t t_max;      /* batch iterations, 0: auto */
  double support_radius;
  int32_t estimator;  /* TADA_ESTIMATOR_* */
  int32_t weight;     /* TADA_WEIGHT_*: mass per diagram point when embedding */
  double min_variance; /* drop embedding coords whose training mass variance
                          falls below this floor; 0 keeps all */
  int32_t calibrate;  /* nonzero: calibrate a threshold on the training windows */
  double alpha;
  double delta; /* 0: alpha/2 */
} tada_fit_config;

void tada_fit_config_defaults(tada_fit_config* cfg);

#define TADA_MAX_ORDERS 16

typedef struct tada_fit_report {
  int64_t n_windows;
  int32_t n_channels;
  int32_t n_orders; /* orders kept in the model */
  int32_t orders[TADA_MAX_ORDERS];
  int32_t k_per_order[TADA_MAX_ORDERS];
  double quantization_cost[TADA_MAX_ORDERS];
  int32_t n_dropped;
  int32_t dropped_orders[TADA_MAX_ORDERS];
  int64_t zero_variance_windows;
  double diagram_seconds;
  double quantize_seconds;
  double vectorize_seconds;
  double score_fit_seconds;
  double calibrate_seconds;
  double total_seconds;
} tada_fit_report;

/* Labels on the training series are ignored. report may be NULL. */
tada_status tada_fit(const tada_series* series, const tada_fit_config* cfg, tada_model** out,
                     tada_fit_report* report);

tada_status tada_model_save(const tada_model* model, const char* path);
tada_status tada_model_load(const char* path, tada_model** out);
int32_t tada_model_dimension(const tada_model* model);
int32_t tada_model_n_channels(const tada_model* model);
int32_t tada_model_has_threshold(const tada_model* model);
/* Only meaningful when tada_model_has_threshold returns nonzero. */
double tada_model_threshold(const tada_model* model);
void tada_model_free(tada_model* model);

/* ---- scoring --------------------------------------------------------- */

tada_status tada_score(const tada_model* model, const tada_series* series, tada_scores** out);

int64_t tada_scores_n_windows(const tada_scores* scores);
int64_t tada_scores_length(const tada_scores* scores); /* timestamps */
int32_t tada_scores_dimension(const tada_scores* scores);
const double* tada_scores_window(const tada_scores* scores);         /* n_windows */
const int64_t* tada_scores_window_starts(const tada_scores* scores); /* n_windows */
const double* tada_scores_timestamp(const tada_scores* scores);      /* length */
/* Row-major n_windows x dimension; per-coordinate deviations for
 * interpretation, not part of the anomaly score itself. */
const double* tada_scores_centers(const tada_scores* scores);
int64_t tada_scores_uncovered(const tada_scores* scores);
void tada_scores_free(tada_scores* scores);

/* ---- evaluation ------------------------------------------------------ */

typedef struct tada_eval_result {
  double roc_auc;
  double pr_auc;
  double range_pr_auc; /* existence-recall variant */
  int64_t n_ranges;
} tada_eval_result;

/* labels must contain both classes for roc_auc and at least one positive
 * for the PR metrics. */
tada_status tada_evaluate(const double* scores, const uint8_t* labels, int64_t n,
                          tada_eval_result* out);

/* ---- diagnostics ----------------------------------------------------- */

/* Per-window persistence diagrams of the correlation graphs, written as CSV
 * rows window_index,order,birth,death,weight. */
tada_status tada_export_diagrams(const tada_series* series, int64_t delta, int64_t stride,
                                 int32_t max_order, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* TADA_H */
