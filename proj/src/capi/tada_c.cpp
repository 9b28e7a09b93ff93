#include "tada/tada.h"

#include <cstring>
#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tada/error.hpp"
#include "tada/evaluation.hpp"
#include "tada/io.hpp"
#include "tada/pipeline.hpp"
#include "tada/synthgen.hpp"
#include "tada/timeseries.hpp"

struct tada_series {
  tada::TimeSeries ts;
};
struct tada_model {
  tada::TadaModel m;
};
struct tada_scores {
  tada::ScoreSeries s;
  std::vector<double> centers_row_major;
};

namespace {

thread_local std::string g_last_error;

tada_status map_code(tada::ErrorCode code) {
  switch (code) {
    case tada::ErrorCode::kInvalidArgument: return TADA_ERR_INVALID_ARGUMENT;
    case tada::ErrorCode::kIo: return TADA_ERR_IO;
    case tada::ErrorCode::kParse: return TADA_ERR_PARSE;
    case tada::ErrorCode::kNonFinite: return TADA_ERR_NONFINITE;
    case tada::ErrorCode::kDimensionMismatch: return TADA_ERR_DIMENSION_MISMATCH;
    case tada::ErrorCode::kTooFewSamples: return TADA_ERR_TOO_FEW_SAMPLES;
    case tada::ErrorCode::kOrderTooLarge: return TADA_ERR_ORDER_TOO_LARGE;
    case tada::ErrorCode::kVersionMismatch: return TADA_ERR_VERSION_MISMATCH;
    case tada::ErrorCode::kCorruptFile: return TADA_ERR_CORRUPT_FILE;
    case tada::ErrorCode::kDegenerate: return TADA_ERR_DEGENERATE;
    case tada::ErrorCode::kSizeLimit: return TADA_ERR_SIZE_LIMIT;
  }
  return TADA_ERR_INTERNAL;
}

template <typename F>
tada_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return TADA_OK;
  } catch (const tada::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TADA_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TADA_ERR_INTERNAL;
  }
}

void require_arg(bool ok, const char* what) {
  tada::require(ok, tada::ErrorCode::kInvalidArgument, what);
}

}  // namespace

extern "C" {

const char* tada_version(void) { return "1.0.0"; }

const char* tada_status_name(tada_status status) {
  switch (status) {
    case TADA_OK: return "ok";
    case TADA_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TADA_ERR_IO: return "io error";
    case TADA_ERR_PARSE: return "parse error";
    case TADA_ERR_NONFINITE: return "non-finite value";
    case TADA_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case TADA_ERR_TOO_FEW_SAMPLES: return "too few samples";
    case TADA_ERR_ORDER_TOO_LARGE: return "order too large";
    case TADA_ERR_VERSION_MISMATCH: return "version mismatch";
    case TADA_ERR_CORRUPT_FILE: return "corrupt file";
    case TADA_ERR_DEGENERATE: return "degenerate input";
    case TADA_ERR_SIZE_LIMIT: return "size limit exceeded";
    case TADA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* tada_last_error(void) { return g_last_error.c_str(); }

tada_status tada_series_create(const double* values, int64_t length, int32_t channels,
                               const uint8_t* labels, double sample_rate, tada_series** out) {
  return guarded([&] {
    require_arg(values != nullptr && out != nullptr, "values and out must not be NULL");
    require_arg(length >= 1 && channels >= 1, "length and channels must be positive");
    tada::TimeSeries ts;
    ts.values.resize(length, channels);
    for (int64_t t = 0; t < length; ++t) {
      for (int32_t c = 0; c < channels; ++c) ts.values(t, c) = values[t * channels + c];
    }
    if (labels) ts.labels.assign(labels, labels + length);
    if (sample_rate > 0.0) ts.sample_rate = sample_rate;
    ts.validate();
    *out = new tada_series{std::move(ts)};
  });
}

tada_status tada_series_load_csv(const char* path, const char* label_column, tada_series** out) {
  return guarded([&] {
    require_arg(path != nullptr && out != nullptr, "path and out must not be NULL");
    tada::CsvOptions opts;
    if (label_column) opts.label_column = label_column;
    *out = new tada_series{tada::load_csv(path, opts)};
  });
}

tada_status tada_series_save_csv(const tada_series* series, const char* path) {
  return guarded([&] {
    require_arg(series != nullptr && path != nullptr, "series and path must not be NULL");
    tada::save_csv(path, series->ts);
  });
}

int64_t tada_series_length(const tada_series* series) {
  return series ? series->ts.length() : 0;
}

int32_t tada_series_channels(const tada_series* series) {
  return series ? static_cast<int32_t>(series->ts.channels()) : 0;
}

const uint8_t* tada_series_labels(const tada_series* series) {
  if (!series || !series->ts.has_labels()) return nullptr;
  return series->ts.labels.data();
}

void tada_series_free(tada_series* series) { delete series; }

void tada_wheels_spec_defaults(tada_wheels_spec* spec) {
  if (!spec) return;
  *spec = tada_wheels_spec{};
  spec->n_channels = 64;
  spec->sample_rate = 500.0;
  spec->duration_s = 20.0;
  spec->anomaly_len = 500;
  spec->anomaly_start = -1;
  spec->seed = 0;
  spec->ar2_peak_freq = 10.0;
  spec->ar2_modulus = 1.01;
  spec->noise_std = 1.0;
}

tada_status tada_generate_wheels(const tada_wheels_spec* spec, tada_series** out) {
  return guarded([&] {
    require_arg(spec != nullptr && out != nullptr, "spec and out must not be NULL");
    tada::WheelSpec ws;
    ws.n_channels = spec->n_channels;
    ws.sample_rate = spec->sample_rate;
    ws.duration_s = spec->duration_s;
    ws.anomaly_len = spec->anomaly_len;
    if (spec->anomaly_start >= 0) ws.anomaly_start = spec->anomaly_start;
    ws.seed = spec->seed;
    ws.ar2_peak_freq = spec->ar2_peak_freq;
    ws.ar2_modulus = spec->ar2_modulus;
    ws.noise_std = spec->noise_std;
    *out = new tada_series{tada::generate_wheels(ws)};
  });
}

void tada_ar1_spec_defaults(tada_ar1_spec* spec) {
  if (!spec) return;
  *spec = tada_ar1_spec{};
  spec->n_channels = 4;
  spec->length = 2000;
  spec->phi = 0.9;
  spec->noise_std = 1.0;
  spec->anomaly_positions = nullptr;
  spec->magnitudes = nullptr;
  spec->n_anomalies = 0;
  spec->seed = 0;
}

tada_status tada_generate_ar1(const tada_ar1_spec* spec, tada_series** out) {
  return guarded([&] {
    require_arg(spec != nullptr && out != nullptr, "spec and out must not be NULL");
    require_arg(spec->n_anomalies >= 0, "n_anomalies must be nonnegative");
    require_arg(spec->n_anomalies == 0 ||
                    (spec->anomaly_positions != nullptr && spec->magnitudes != nullptr),
                "anomaly arrays must be given when n_anomalies > 0");
    tada::Ar1Spec as;
    as.n_channels = spec->n_channels;
    as.length = spec->length;
    as.phi = spec->phi;
    as.noise_std = spec->noise_std;
    as.anomaly_positions.assign(spec->anomaly_positions,
                                spec->anomaly_positions + spec->n_anomalies);
    as.magnitudes.assign(spec->magnitudes, spec->magnitudes + spec->n_anomalies);
    as.seed = spec->seed;
    *out = new tada_series{tada::generate_ar1_pointanomaly(as)};
  });
}

void tada_fit_config_defaults(tada_fit_config* cfg) {
  if (!cfg) return;
  *cfg = tada_fit_config{};
  const tada::PipelineConfig d;
  cfg->window_delta = d.window.delta;
  cfg->window_stride = d.window.stride;
  cfg->max_order = d.max_order;
  cfg->k = d.k;
  cfg->k_budget = TADA_K_PER_ORDER;
  cfg->h = d.h;
  cfg->n_start = d.n_start;
  cfg->seed = d.seed;
  cfg->quantizer = TADA_QUANTIZER_BATCH;
  cfg->minibatch_q = d.minibatch_q;
  cfg->spacing = TADA_SPACING_DENSE;
  cfg->t_max = d.t_max;
  cfg->support_radius = d.support_radius;
  cfg->estimator = TADA_ESTIMATOR_MCD;
  cfg->weight = TADA_WEIGHT_CONSTANT;
  cfg->min_variance = d.min_variance;
  cfg->calibrate = 0;
  cfg->alpha = d.alpha;
  cfg->delta = d.delta;
}

namespace {

tada::PipelineConfig to_pipeline_config(const tada_fit_config& cfg) {
  require_arg(cfg.quantizer == TADA_QUANTIZER_BATCH || cfg.quantizer == TADA_QUANTIZER_MINIBATCH,
              "quantizer must be batch or minibatch");
  require_arg(cfg.spacing == TADA_SPACING_DENSE || cfg.spacing == TADA_SPACING_PAPER,
              "spacing must be dense or paper");
  require_arg(cfg.estimator == TADA_ESTIMATOR_MCD || cfg.estimator == TADA_ESTIMATOR_PLAIN,
              "estimator must be mcd or plain");
  require_arg(cfg.weight == TADA_WEIGHT_CONSTANT || cfg.weight == TADA_WEIGHT_PERSISTENCE,
              "diagram weight must be constant or persistence");
  require_arg(cfg.k_budget == TADA_K_PER_ORDER || cfg.k_budget == TADA_K_TOTAL,
              "centroid budget mode must be per-order or total");
  tada::PipelineConfig p;
  p.window.delta = cfg.window_delta;
  p.window.stride = cfg.window_stride;
  p.max_order = cfg.max_order;
  p.k = cfg.k;
  p.k_budget = cfg.k_budget == TADA_K_TOTAL ? tada::KBudget::kTotal : tada::KBudget::kPerOrder;
  p.h = cfg.h;
  p.n_start = cfg.n_start;
  p.seed = cfg.seed;
  p.quantizer = cfg.quantizer == TADA_QUANTIZER_MINIBATCH ? tada::QuantizerKind::kMinibatch
                                                          : tada::QuantizerKind::kBatch;
  p.minibatch_q = cfg.minibatch_q;
  p.spacing = cfg.spacing == TADA_SPACING_PAPER ? tada::MinibatchSpacing::kPaper
                                                : tada::MinibatchSpacing::kDense;
  p.t_max = cfg.t_max;
  p.support_radius = cfg.support_radius;
  p.estimator = cfg.estimator == TADA_ESTIMATOR_PLAIN ? tada::Estimator::kPlain
                                                      : tada::Estimator::kMcd;
  p.weight = cfg.weight == TADA_WEIGHT_PERSISTENCE ? tada::DiagramWeight::kPersistence
                                                   : tada::DiagramWeight::kConstantOne;
  p.min_variance = cfg.min_variance;
  p.calibrate = cfg.calibrate != 0;
  p.alpha = cfg.alpha;
  p.delta = cfg.delta;
  return p;
}

void fill_report(const tada::FitReport& rep, tada_fit_report* out) {
  if (!out) return;
  *out = tada_fit_report{};
  out->n_windows = rep.n_windows;
  out->n_channels = rep.n_channels;
  out->n_orders = static_cast<int32_t>(rep.orders.size());
  for (std::size_t i = 0; i < rep.orders.size() && i < TADA_MAX_ORDERS; ++i) {
    out->orders[i] = rep.orders[i];
    out->k_per_order[i] = rep.k_per_order[i];
    out->quantization_cost[i] = rep.quantization_cost[i];
  }
  out->n_dropped = static_cast<int32_t>(rep.dropped_orders.size());
  for (std::size_t i = 0; i < rep.dropped_orders.size() && i < TADA_MAX_ORDERS; ++i) {
    out->dropped_orders[i] = rep.dropped_orders[i];
  }
  out->zero_variance_windows = rep.zero_variance_windows;
  out->diagram_seconds = rep.diagram_seconds;
  out->quantize_seconds = rep.quantize_seconds;
  out->vectorize_seconds = rep.vectorize_seconds;
  out->score_fit_seconds = rep.score_fit_seconds;
  out->calibrate_seconds = rep.calibrate_seconds;
  out->total_seconds = rep.total_seconds;
}

}  // namespace

tada_status tada_fit(const tada_series* series, const tada_fit_config* cfg, tada_model** out,
                     tada_fit_report* report) {
  return guarded([&] {
    require_arg(series != nullptr && cfg != nullptr && out != nullptr,
                "series, cfg and out must not be NULL");
    tada::FitReport rep;
    auto model = tada::fit(series->ts, to_pipeline_config(*cfg), &rep);
    fill_report(rep, report);
    *out = new tada_model{std::move(model)};
  });
}

tada_status tada_model_save(const tada_model* model, const char* path) {
  return guarded([&] {
    require_arg(model != nullptr && path != nullptr, "model and path must not be NULL");
    tada::save_model(model->m, path);
  });
}

tada_status tada_model_load(const char* path, tada_model** out) {
  return guarded([&] {
    require_arg(path != nullptr && out != nullptr, "path and out must not be NULL");
    *out = new tada_model{tada::load_model(path)};
  });
}

int32_t tada_model_dimension(const tada_model* model) {
  return model ? model->m.dimension() : 0;
}

int32_t tada_model_n_channels(const tada_model* model) {
  return model ? model->m.n_channels : 0;
}

int32_t tada_model_has_threshold(const tada_model* model) {
  return model && model->m.threshold ? 1 : 0;
}

double tada_model_threshold(const tada_model* model) {
  return model && model->m.threshold ? model->m.threshold->t_hat : 0.0;
}

void tada_model_free(tada_model* model) { delete model; }

tada_status tada_score(const tada_model* model, const tada_series* series, tada_scores** out) {
  return guarded([&] {
    require_arg(model != nullptr && series != nullptr && out != nullptr,
                "model, series and out must not be NULL");
    auto scores = std::make_unique<tada_scores>();
    scores->s = tada::score_series(model->m, series->ts);
    const auto& cs = scores->s.center_scores;
    scores->centers_row_major.resize(static_cast<std::size_t>(cs.rows()) *
                                     static_cast<std::size_t>(cs.cols()));
    for (Eigen::Index r = 0; r < cs.rows(); ++r) {
      for (Eigen::Index c = 0; c < cs.cols(); ++c) {
        scores->centers_row_major[static_cast<std::size_t>(r * cs.cols() + c)] = cs(r, c);
      }
    }
    *out = scores.release();
  });
}

int64_t tada_scores_n_windows(const tada_scores* scores) {
  return scores ? static_cast<int64_t>(scores->s.window_scores.size()) : 0;
}

int64_t tada_scores_length(const tada_scores* scores) {
  return scores ? static_cast<int64_t>(scores->s.timestamp_scores.size()) : 0;
}

int32_t tada_scores_dimension(const tada_scores* scores) {
  return scores ? static_cast<int32_t>(scores->s.center_scores.cols()) : 0;
}

const double* tada_scores_window(const tada_scores* scores) {
  return scores ? scores->s.window_scores.data() : nullptr;
}

const int64_t* tada_scores_window_starts(const tada_scores* scores) {
  return scores ? scores->s.window_starts.data() : nullptr;
}

const double* tada_scores_timestamp(const tada_scores* scores) {
  return scores ? scores->s.timestamp_scores.data() : nullptr;
}

const double* tada_scores_centers(const tada_scores* scores) {
  return scores ? scores->centers_row_major.data() : nullptr;
}

int64_t tada_scores_uncovered(const tada_scores* scores) {
  return scores ? scores->s.uncovered_timestamps : 0;
}

void tada_scores_free(tada_scores* scores) { delete scores; }

tada_status tada_evaluate(const double* scores, const uint8_t* labels, int64_t n,
                          tada_eval_result* out) {
  return guarded([&] {
    require_arg(scores != nullptr && labels != nullptr && out != nullptr,
                "scores, labels and out must not be NULL");
    require_arg(n >= 1, "need at least one sample");
    const auto r = tada::evaluate(std::span<const double>(scores, static_cast<std::size_t>(n)),
                                  std::span<const uint8_t>(labels, static_cast<std::size_t>(n)));
    out->roc_auc = r.roc_auc;
    out->pr_auc = r.pr_auc;
    out->range_pr_auc = r.range_pr_auc;
    out->n_ranges = r.n_anomaly_ranges;
  });
}

tada_status tada_export_diagrams(const tada_series* series, int64_t delta, int64_t stride,
                                 int32_t max_order, const char* path) {
  return guarded([&] {
    require_arg(series != nullptr && path != nullptr, "series and path must not be NULL");
    tada::WindowConfig w;
    w.delta = delta;
    w.stride = stride;
    const auto per_window = tada::window_diagrams(series->ts, w, max_order);
    std::vector<int64_t> indices;
    std::vector<tada::PersistenceDiagram> flat;
    for (std::size_t i = 0; i < per_window.size(); ++i) {
      for (const auto& d : per_window[i]) {
        indices.push_back(static_cast<int64_t>(i));
        flat.push_back(d);
      }
    }
    tada::save_diagrams_csv(path, indices, flat);
  });
}

}  // extern "C"
