// Command line front end. Talks to the library exclusively through the C
// API so it doubles as a usage example for tada/tada.h.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tada/tada.h"

using nlohmann::json;

namespace {

int fail_status(tada_status st, const std::string& context) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", context.c_str(), tada_last_error(),
               tada_status_name(st));
  return static_cast<int>(st);
}

struct SeriesHandle {
  tada_series* p = nullptr;
  ~SeriesHandle() { tada_series_free(p); }
};
struct ModelHandle {
  tada_model* p = nullptr;
  ~ModelHandle() { tada_model_free(p); }
};
struct ScoresHandle {
  tada_scores* p = nullptr;
  ~ScoresHandle() { tada_scores_free(p); }
};

// ---- generate --------------------------------------------------------

struct WheelsArgs {
  int n_datasets = 1;
  int channels = 64;
  double rate = 500.0;
  double duration = 20.0;
  std::int64_t anomaly_len = 500;
  std::int64_t anomaly_start = -1;
  double noise = 1.0;
  double peak_freq = 10.0;
  double modulus = 1.01;
  std::uint64_t seed = 0;
  std::string out = "wheels";
};

std::string indexed_path(const std::string& out, int i, int n) {
  if (n == 1 && out.size() > 4 && out.substr(out.size() - 4) == ".csv") return out;
  return out + "_" + std::to_string(i) + ".csv";
}

int run_wheels(const WheelsArgs& a) {
  std::printf(
      "config: generate wheels --n %d --channels %d --rate %g --duration %g "
      "--anomaly-len %" PRId64 " --anomaly-start %" PRId64
      " --noise %g --peak-freq %g --modulus %g --seed %llu --out %s\n",
      a.n_datasets, a.channels, a.rate, a.duration, a.anomaly_len, a.anomaly_start, a.noise,
      a.peak_freq, a.modulus, static_cast<unsigned long long>(a.seed), a.out.c_str());
  for (int i = 0; i < a.n_datasets; ++i) {
    tada_wheels_spec spec;
    tada_wheels_spec_defaults(&spec);
    spec.n_channels = a.channels;
    spec.sample_rate = a.rate;
    spec.duration_s = a.duration;
    spec.anomaly_len = a.anomaly_len;
    spec.anomaly_start = a.anomaly_start;
    spec.seed = a.seed + static_cast<std::uint64_t>(i);
    spec.ar2_peak_freq = a.peak_freq;
    spec.ar2_modulus = a.modulus;
    spec.noise_std = a.noise;

    SeriesHandle series;
    if (auto st = tada_generate_wheels(&spec, &series.p); st != TADA_OK) {
      return fail_status(st, "generate wheels");
    }
    const std::string path = indexed_path(a.out, i, a.n_datasets);
    if (auto st = tada_series_save_csv(series.p, path.c_str()); st != TADA_OK) {
      return fail_status(st, "write " + path);
    }
    std::printf("wrote %s (%" PRId64 " x %d, seed %llu)\n", path.c_str(),
                tada_series_length(series.p), tada_series_channels(series.p),
                static_cast<unsigned long long>(spec.seed));
  }
  return 0;
}

struct Ar1Args {
  int channels = 4;
  std::int64_t length = 2000;
  double phi = 0.9;
  double noise = 1.0;
  int n_anomalies = 0;
  double magnitude = 10.0;
  std::uint64_t seed = 0;
  std::string out = "ar1.csv";
};

int run_ar1(const Ar1Args& a) {
  std::printf(
      "config: generate ar1 --channels %d --length %" PRId64
      " --phi %g --noise %g --anomalies %d --magnitude %g --seed %llu --out %s\n",
      a.channels, a.length, a.phi, a.noise, a.n_anomalies, a.magnitude,
      static_cast<unsigned long long>(a.seed), a.out.c_str());

  // distinct spike positions, drawn reproducibly from the seed
  std::vector<std::int64_t> positions;
  std::vector<double> magnitudes;
  if (a.n_anomalies > 0) {
    if (static_cast<std::int64_t>(a.n_anomalies) > a.length) {
      std::fprintf(stderr, "error: more anomalies than timestamps\n");
      return static_cast<int>(TADA_ERR_INVALID_ARGUMENT);
    }
    std::mt19937_64 rng(a.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::int64_t> pool(static_cast<std::size_t>(a.length));
    for (std::int64_t t = 0; t < a.length; ++t) pool[static_cast<std::size_t>(t)] = t;
    for (int i = 0; i < a.n_anomalies; ++i) {
      std::uniform_int_distribution<std::int64_t> pick(i, a.length - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
      positions.push_back(pool[static_cast<std::size_t>(i)]);
      magnitudes.push_back(a.magnitude);
    }
    std::sort(positions.begin(), positions.end());
  }

  tada_ar1_spec spec;
  tada_ar1_spec_defaults(&spec);
  spec.n_channels = a.channels;
  spec.length = a.length;
  spec.phi = a.phi;
  spec.noise_std = a.noise;
  spec.anomaly_positions = positions.empty() ? nullptr : positions.data();
  spec.magnitudes = magnitudes.empty() ? nullptr : magnitudes.data();
  spec.n_anomalies = static_cast<std::int64_t>(positions.size());
  spec.seed = a.seed;

  SeriesHandle series;
  if (auto st = tada_generate_ar1(&spec, &series.p); st != TADA_OK) {
    return fail_status(st, "generate ar1");
  }
  if (auto st = tada_series_save_csv(series.p, a.out.c_str()); st != TADA_OK) {
    return fail_status(st, "write " + a.out);
  }
  std::printf("wrote %s (%" PRId64 " x %d)\n", a.out.c_str(), tada_series_length(series.p),
              tada_series_channels(series.p));
  return 0;
}

// ---- fit -------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string model = "model.json";
  std::string label_column = "is_anomaly";
  std::int64_t window = 100;
  std::int64_t stride = 10;
  int max_order = 2;
  int k = 10;
  std::string k_budget = "per-order";
  double h = 0.1;
  int restarts = 10;
  std::uint64_t seed = 0;
  std::string quantizer = "batch";
  std::int64_t q = 0;
  std::string spacing = "dense";
  int t_max = 0;
  double support_radius = 4.0;
  std::string estimator = "mcd";
  std::string weight = "constant";
  double min_variance = 0.0;
  bool calibrate = false;
  double alpha = 0.05;
  double delta = 0.0;
};

int run_fit(const FitArgs& a) {
  std::printf(
      "config: fit --input %s --model %s --window %" PRId64 " --stride %" PRId64
      " --max-order %d --k %d --k-budget %s --h %g --restarts %d --seed %llu --quantizer %s"
      " --q %" PRId64
      " --spacing %s --t-max %d --support-radius %g --estimator %s --weight %s"
      " --min-variance %g%s --alpha %g --delta %g\n",
      a.input.c_str(), a.model.c_str(), a.window, a.stride, a.max_order, a.k,
      a.k_budget.c_str(), a.h, a.restarts,
      static_cast<unsigned long long>(a.seed), a.quantizer.c_str(), a.q, a.spacing.c_str(),
      a.t_max, a.support_radius, a.estimator.c_str(), a.weight.c_str(), a.min_variance,
      a.calibrate ? " --calibrate" : "", a.alpha, a.delta);

  SeriesHandle series;
  if (auto st = tada_series_load_csv(a.input.c_str(), a.label_column.c_str(), &series.p);
      st != TADA_OK) {
    return fail_status(st, "read " + a.input);
  }

  tada_fit_config cfg;
  tada_fit_config_defaults(&cfg);
  cfg.window_delta = a.window;
  cfg.window_stride = a.stride;
  cfg.max_order = a.max_order;
  cfg.k = a.k;
  cfg.k_budget = a.k_budget == "total" ? TADA_K_TOTAL : TADA_K_PER_ORDER;
  cfg.h = a.h;
  cfg.n_start = a.restarts;
  cfg.seed = a.seed;
  cfg.quantizer = a.quantizer == "minibatch" ? TADA_QUANTIZER_MINIBATCH : TADA_QUANTIZER_BATCH;
  cfg.minibatch_q = a.q;
  cfg.spacing = a.spacing == "paper" ? TADA_SPACING_PAPER : TADA_SPACING_DENSE;
  cfg.t_max = a.t_max;
  cfg.support_radius = a.support_radius;
  cfg.estimator = a.estimator == "plain" ? TADA_ESTIMATOR_PLAIN : TADA_ESTIMATOR_MCD;
  cfg.weight = a.weight == "persistence" ? TADA_WEIGHT_PERSISTENCE : TADA_WEIGHT_CONSTANT;
  cfg.min_variance = a.min_variance;
  cfg.calibrate = a.calibrate ? 1 : 0;
  cfg.alpha = a.alpha;
  cfg.delta = a.delta;

  ModelHandle model;
  tada_fit_report rep;
  if (auto st = tada_fit(series.p, &cfg, &model.p, &rep); st != TADA_OK) {
    return fail_status(st, "fit");
  }
  if (auto st = tada_model_save(model.p, a.model.c_str()); st != TADA_OK) {
    return fail_status(st, "write " + a.model);
  }

  std::printf("windows: %" PRId64 " of %d channels\n", rep.n_windows, rep.n_channels);
  for (int i = 0; i < rep.n_orders && i < TADA_MAX_ORDERS; ++i) {
    std::printf("order %d: %d centroids, quantization cost %.6g\n", rep.orders[i],
                rep.k_per_order[i], rep.quantization_cost[i]);
  }
  for (int i = 0; i < rep.n_dropped && i < TADA_MAX_ORDERS; ++i) {
    std::printf("order %d: dropped (no diagram points)\n", rep.dropped_orders[i]);
  }
  if (rep.zero_variance_windows > 0) {
    std::printf("windows with constant channels: %" PRId64 "\n", rep.zero_variance_windows);
  }
  std::printf("embedding dimension: %d\n", tada_model_dimension(model.p));
  if (tada_model_has_threshold(model.p)) {
    std::printf("calibrated threshold: %.17g\n", tada_model_threshold(model.p));
  }
  std::printf(
      "timings: diagrams %.2fs, quantize %.2fs, vectorize %.2fs, score fit %.2fs, "
      "calibrate %.2fs, total %.2fs\n",
      rep.diagram_seconds, rep.quantize_seconds, rep.vectorize_seconds, rep.score_fit_seconds,
      rep.calibrate_seconds, rep.total_seconds);
  std::printf("wrote %s\n", a.model.c_str());
  return 0;
}

// ---- score -----------------------------------------------------------

struct ScoreArgs {
  std::string model;
  std::string input;
  std::string out = "scores.csv";
  std::string windows_out;  // optional window-level CSV with center scores
  std::string label_column = "is_anomaly";
};

int run_score(const ScoreArgs& a) {
  std::printf("config: score --model %s --input %s --out %s%s%s\n", a.model.c_str(),
              a.input.c_str(), a.out.c_str(), a.windows_out.empty() ? "" : " --windows ",
              a.windows_out.c_str());

  ModelHandle model;
  if (auto st = tada_model_load(a.model.c_str(), &model.p); st != TADA_OK) {
    return fail_status(st, "read " + a.model);
  }
  SeriesHandle series;
  if (auto st = tada_series_load_csv(a.input.c_str(), a.label_column.c_str(), &series.p);
      st != TADA_OK) {
    return fail_status(st, "read " + a.input);
  }
  ScoresHandle scores;
  if (auto st = tada_score(model.p, series.p, &scores.p); st != TADA_OK) {
    return fail_status(st, "score");
  }

  {
    std::ofstream f(a.out);
    if (!f.good()) {
      std::fprintf(stderr, "error: cannot write %s\n", a.out.c_str());
      return static_cast<int>(TADA_ERR_IO);
    }
    f << "timestamp_index,score\n";
    const double* ts = tada_scores_timestamp(scores.p);
    const std::int64_t n = tada_scores_length(scores.p);
    char buf[64];
    for (std::int64_t t = 0; t < n; ++t) {
      std::snprintf(buf, sizeof(buf), "%" PRId64 ",%.17g\n", t, ts[t]);
      f << buf;
    }
  }
  if (!a.windows_out.empty()) {
    std::ofstream f(a.windows_out);
    if (!f.good()) {
      std::fprintf(stderr, "error: cannot write %s\n", a.windows_out.c_str());
      return static_cast<int>(TADA_ERR_IO);
    }
    const std::int64_t n = tada_scores_n_windows(scores.p);
    const int dim = tada_scores_dimension(scores.p);
    f << "window_index,start,window_score";
    for (int c = 0; c < dim; ++c) f << ",center_" << c;
    f << "\n";
    const double* ws = tada_scores_window(scores.p);
    const std::int64_t* starts = tada_scores_window_starts(scores.p);
    const double* centers = tada_scores_centers(scores.p);
    char buf[64];
    for (std::int64_t w = 0; w < n; ++w) {
      std::snprintf(buf, sizeof(buf), "%" PRId64 ",%" PRId64 ",%.17g", w, starts[w], ws[w]);
      f << buf;
      for (int c = 0; c < dim; ++c) {
        std::snprintf(buf, sizeof(buf), ",%.17g", centers[w * dim + c]);
        f << buf;
      }
      f << "\n";
    }
  }
  if (tada_scores_uncovered(scores.p) > 0) {
    std::printf("uncovered timestamps (score 0): %" PRId64 "\n", tada_scores_uncovered(scores.p));
  }
  std::printf("wrote %s (%" PRId64 " timestamps, %" PRId64 " windows)\n", a.out.c_str(),
              tada_scores_length(scores.p), tada_scores_n_windows(scores.p));
  return 0;
}

// ---- eval ------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> scores;
  std::vector<std::string> data;
  std::string label_column = "is_anomaly";
  std::string out;  // metrics JSON path, empty = stdout only
};

bool read_score_csv(const std::string& path, std::vector<double>* out) {
  std::ifstream f(path);
  if (!f.good()) return false;
  out->clear();
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) return false;
    std::string cell = line.substr(comma + 1);
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    if (first && (cell.empty() || !(std::isdigit(static_cast<unsigned char>(cell[0])) ||
                                    cell[0] == '-' || cell[0] == '+' || cell[0] == '.'))) {
      first = false;  // header row
      continue;
    }
    first = false;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) return false;
    out->push_back(v);
  }
  return !out->empty();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_eval(const EvalArgs& a) {
  if (a.scores.size() != a.data.size() || a.scores.empty()) {
    std::fprintf(stderr, "error: need matching --scores and --data lists\n");
    return static_cast<int>(TADA_ERR_INVALID_ARGUMENT);
  }
  json report;
  report["datasets"] = json::array();
  std::vector<double> rocs, prs, range_prs;
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    std::vector<double> scores;
    if (!read_score_csv(a.scores[i], &scores)) {
      std::fprintf(stderr, "error: cannot read scores from %s\n", a.scores[i].c_str());
      return static_cast<int>(TADA_ERR_PARSE);
    }
    SeriesHandle series;
    if (auto st = tada_series_load_csv(a.data[i].c_str(), a.label_column.c_str(), &series.p);
        st != TADA_OK) {
      return fail_status(st, "read " + a.data[i]);
    }
    const uint8_t* labels = tada_series_labels(series.p);
    if (!labels) {
      std::fprintf(stderr, "error: %s has no '%s' column\n", a.data[i].c_str(),
                   a.label_column.c_str());
      return static_cast<int>(TADA_ERR_INVALID_ARGUMENT);
    }
    if (static_cast<std::int64_t>(scores.size()) != tada_series_length(series.p)) {
      std::fprintf(stderr, "error: %zu scores vs %" PRId64 " labels for %s\n", scores.size(),
                   tada_series_length(series.p), a.data[i].c_str());
      return static_cast<int>(TADA_ERR_DIMENSION_MISMATCH);
    }
    tada_eval_result r;
    if (auto st = tada_evaluate(scores.data(), labels, static_cast<std::int64_t>(scores.size()), &r);
        st != TADA_OK) {
      return fail_status(st, "evaluate " + a.scores[i]);
    }
    json entry;
    entry["scores"] = a.scores[i];
    entry["data"] = a.data[i];
    entry["roc_auc"] = r.roc_auc;
    entry["pr_auc"] = r.pr_auc;
    entry["range_pr_auc (existence-recall variant)"] = r.range_pr_auc;
    entry["n_ranges"] = r.n_ranges;
    report["datasets"].push_back(entry);
    rocs.push_back(r.roc_auc);
    prs.push_back(r.pr_auc);
    range_prs.push_back(r.range_pr_auc);
  }
  if (a.scores.size() > 1) {
    json agg;
    agg["median_roc_auc"] = median(rocs);
    agg["median_pr_auc"] = median(prs);
    agg["median_range_pr_auc (existence-recall variant)"] = median(range_prs);
    agg["count_range_pr_auc_above_0.9"] =
        std::count_if(range_prs.begin(), range_prs.end(), [](double v) { return v > 0.9; });
    report["aggregate"] = agg;
  }
  const std::string text = report.dump(2);
  std::printf("%s\n", text.c_str());
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f.good()) {
      std::fprintf(stderr, "error: cannot write %s\n", a.out.c_str());
      return static_cast<int>(TADA_ERR_IO);
    }
    f << text << "\n";
  }
  return 0;
}

// ---- diagrams --------------------------------------------------------

struct DiagramsArgs {
  std::string input;
  std::string out = "diagrams.csv";
  std::string label_column = "is_anomaly";
  std::int64_t window = 100;
  std::int64_t stride = 10;
  int max_order = 2;
};

int run_diagrams(const DiagramsArgs& a) {
  std::printf("config: diagrams --input %s --out %s --window %" PRId64 " --stride %" PRId64
              " --max-order %d\n",
              a.input.c_str(), a.out.c_str(), a.window, a.stride, a.max_order);
  SeriesHandle series;
  if (auto st = tada_series_load_csv(a.input.c_str(), a.label_column.c_str(), &series.p);
      st != TADA_OK) {
    return fail_status(st, "read " + a.input);
  }
  if (auto st = tada_export_diagrams(series.p, a.window, a.stride, a.max_order, a.out.c_str());
      st != TADA_OK) {
    return fail_status(st, "export diagrams");
  }
  std::printf("wrote %s\n", a.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological anomaly detection for multivariate time series"};
  app.set_version_flag("--version", std::string(tada_version()));
  app.require_subcommand(1);
  // --h is a real flag on fit, so no -h shortcut anywhere
  app.set_help_flag("--help", "Print help");

  auto* gen = app.add_subcommand("generate", "Generate synthetic datasets");
  gen->require_subcommand(1);

  WheelsArgs wa;
  auto* wheels = gen->add_subcommand("wheels", "Latent AR(2) double-wheel datasets");
  wheels->add_option("--n", wa.n_datasets, "Number of datasets")->check(CLI::PositiveNumber);
  wheels->add_option("--channels", wa.channels, "Channel count (even, >= 8)");
  wheels->add_option("--rate", wa.rate, "Sample rate in Hz");
  wheels->add_option("--duration", wa.duration, "Duration in seconds");
  wheels->add_option("--anomaly-len", wa.anomaly_len, "Anomaly window length in samples");
  wheels->add_option("--anomaly-start", wa.anomaly_start, "Fixed anomaly start (-1: random)");
  wheels->add_option("--noise", wa.noise, "Channel noise level");
  wheels->add_option("--peak-freq", wa.peak_freq, "AR(2) spectral peak in Hz");
  wheels->add_option("--modulus", wa.modulus, "AR(2) pole modulus parameter (> 1)");
  wheels->add_option("--seed", wa.seed, "Base seed; dataset i uses seed + i");
  wheels->add_option("--out", wa.out, "Output path prefix");

  Ar1Args aa;
  auto* ar1 = gen->add_subcommand("ar1", "Independent AR(1) channels with point anomalies");
  ar1->add_option("--channels", aa.channels, "Channel count");
  ar1->add_option("--length", aa.length, "Series length");
  ar1->add_option("--phi", aa.phi, "AR(1) coefficient, |phi| < 1");
  ar1->add_option("--noise", aa.noise, "Innovation noise level");
  ar1->add_option("--anomalies", aa.n_anomalies, "Number of random spike positions");
  ar1->add_option("--magnitude", aa.magnitude, "Spike magnitude");
  ar1->add_option("--seed", aa.seed, "Seed");
  ar1->add_option("--out", aa.out, "Output CSV path");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit a detection model on a base-regime series");
  fit->add_option("--input", fa.input, "Training CSV")->required();
  fit->add_option("--model", fa.model, "Output model path");
  fit->add_option("--label-column", fa.label_column, "Label column to strip from the data");
  fit->add_option("--window", fa.window, "Window length");
  fit->add_option("--stride", fa.stride, "Window stride");
  fit->add_option("--max-order", fa.max_order, "Homology orders 0..max_order-1");
  fit->add_option("--k", fa.k, "Centroid budget (see --k-budget)");
  fit->add_option("--k-budget", fa.k_budget,
                  "per-order: k centroids per homology order; total: k split across orders")
      ->check(CLI::IsMember({"per-order", "total"}));
  fit->add_option("--h", fa.h, "Contamination level in [0, 1)");
  fit->add_option("--restarts", fa.restarts, "Quantizer restarts");
  fit->add_option("--seed", fa.seed, "Seed");
  fit->add_option("--quantizer", fa.quantizer, "batch or minibatch")
      ->check(CLI::IsMember({"batch", "minibatch"}));
  fit->add_option("--q", fa.q, "Minibatch size (0: auto)");
  fit->add_option("--spacing", fa.spacing, "Minibatch spacing: dense or paper")
      ->check(CLI::IsMember({"dense", "paper"}));
  fit->add_option("--t-max", fa.t_max, "Batch iterations (0: auto)");
  fit->add_option("--support-radius", fa.support_radius, "Diagram support radius");
  fit->add_option("--estimator", fa.estimator, "mcd or plain")
      ->check(CLI::IsMember({"mcd", "plain"}));
  fit->add_option("--weight", fa.weight, "Diagram point mass: constant or persistence")
      ->check(CLI::IsMember({"constant", "persistence"}));
  fit->add_option("--min-variance", fa.min_variance,
                  "Drop embedding coordinates whose training variance falls "
                  "below this floor (0: keep all)");
  fit->add_flag("--calibrate", fa.calibrate, "Calibrate a threshold on the training windows");
  fit->add_option("--alpha", fa.alpha, "Target exceedance level");
  fit->add_option("--delta", fa.delta, "Exceedance slack (0: alpha/2)");

  ScoreArgs sa;
  auto* score = app.add_subcommand("score", "Score a series with a fitted model");
  score->add_option("--model", sa.model, "Model path")->required();
  score->add_option("--input", sa.input, "Series CSV")->required();
  score->add_option("--out", sa.out, "Per-timestamp score CSV");
  score->add_option("--windows", sa.windows_out, "Optional window-level CSV with center scores");
  score->add_option("--label-column", sa.label_column, "Label column to strip from the data");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate score files against labeled data");
  eval->add_option("--scores", ea.scores, "Score CSV files (one per dataset)")->required();
  eval->add_option("--data", ea.data, "Labeled dataset CSVs, matching --scores")->required();
  eval->add_option("--label-column", ea.label_column, "Label column name");
  eval->add_option("--out", ea.out, "Write the metrics JSON here too");

  DiagramsArgs da;
  auto* diagrams = app.add_subcommand("diagrams", "Export per-window persistence diagrams");
  diagrams->add_option("--input", da.input, "Series CSV")->required();
  diagrams->add_option("--out", da.out, "Output CSV path");
  diagrams->add_option("--label-column", da.label_column, "Label column to strip from the data");
  diagrams->add_option("--window", da.window, "Window length");
  diagrams->add_option("--stride", da.stride, "Window stride");
  diagrams->add_option("--max-order", da.max_order, "Homology orders 0..max_order-1");

  for (auto* sub : {gen, wheels, ar1, fit, score, eval, diagrams}) {
    sub->set_help_flag("--help", "Print help");
  }

  CLI11_PARSE(app, argc, argv);

  if (wheels->parsed()) return run_wheels(wa);
  if (ar1->parsed()) return run_ar1(aa);
  if (fit->parsed()) return run_fit(fa);
  if (score->parsed()) return run_score(sa);
  if (eval->parsed()) return run_eval(ea);
  if (diagrams->parsed()) return run_diagrams(da);
  return 0;
}
