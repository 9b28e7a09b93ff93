#include "tada/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <utility>

#include "json.hpp"
#include "tada/error.hpp"
#include "tada/parallel.hpp"
#include "tada/persistence.hpp"
#include "tada/rng.hpp"

namespace tada {

namespace {

using json = nlohmann::json;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

Eigen::VectorXd embed_window(const std::vector<int>& orders,
                             const std::vector<Vectorizer>& vectorizers,
                             const std::vector<std::vector<PersistenceDiagram>>& by_order,
                             std::int64_t w, int dim) {
  Eigen::VectorXd v(dim);
  int offset = 0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const int len = vectorizers[i].dimension();
    v.segment(offset, len) = vectorize(vectorizers[i], by_order[static_cast<std::size_t>(orders[i])][static_cast<std::size_t>(w)]);
    offset += len;
  }
  return v;
}

}  // namespace

std::vector<std::vector<PersistenceDiagram>> window_diagrams(
    const TimeSeries& ts, const WindowConfig& window, int max_order,
    DiagramWeight weight, std::int64_t* zero_variance_windows) {
  ts.validate();
  window.validate(ts.length());
  require(max_order >= 1 && max_order <= ts.channels() - 1, ErrorCode::kOrderTooLarge,
          "homology order budget must lie in [1, channels-1]");
  const auto windows = slice_windows(ts, window);
  const std::int64_t n = static_cast<std::int64_t>(windows.size());

  std::vector<std::vector<PersistenceDiagram>> diagrams(static_cast<std::size_t>(n));
  std::atomic<std::int64_t> zero_variance{0};
  parallel_for(n, [&](std::int64_t w) {
    const SimilarityMatrix sim = similarity(ts, windows[static_cast<std::size_t>(w)]);
    if (sim.zero_variance_channels > 0) zero_variance.fetch_add(1, std::memory_order_relaxed);
    FilteredGraph g;
    g.weights = sim.weights;
    diagrams[static_cast<std::size_t>(w)] = rips_persistence(g, max_order, weight);
  });
  const std::int64_t zv = zero_variance.load();
  if (zero_variance_windows) *zero_variance_windows = zv;
  if (zv > 0) {
    warn(std::to_string(zv) + " of " + std::to_string(n) +
         " windows contain constant channels; their correlations were taken as 0");
  }
  return diagrams;
}

TadaModel fit(const TimeSeries& ts, const PipelineConfig& cfg, FitReport* report) {
  const auto t_total = clock_type::now();
  ts.validate();
  cfg.window.validate(ts.length());
  require(cfg.k >= 1, ErrorCode::kInvalidArgument, "centroid budget must be at least 1");
  require(cfg.n_start >= 1, ErrorCode::kInvalidArgument, "need at least one restart");
  require(std::isfinite(cfg.support_radius) && cfg.support_radius > 0.0,
          ErrorCode::kInvalidArgument, "support radius must be positive");
  require(std::isfinite(cfg.h) && cfg.h >= 0.0 && cfg.h < 1.0, ErrorCode::kInvalidArgument,
          "contamination level must lie in [0, 1)");
  require(std::isfinite(cfg.min_variance) && cfg.min_variance >= 0.0,
          ErrorCode::kInvalidArgument, "variance floor must be nonnegative");

  const auto windows = slice_windows(ts, cfg.window);
  const std::int64_t n = static_cast<std::int64_t>(windows.size());
  require(n >= 2, ErrorCode::kTooFewSamples,
          "need at least 2 windows, got " + std::to_string(n) +
              " (shorten the window or the stride)");

  FitReport local_report;
  FitReport& rep = report ? *report : local_report;
  rep = FitReport{};
  rep.n_windows = n;
  rep.n_channels = static_cast<int>(ts.channels());

  auto t0 = clock_type::now();
  auto per_window =
      window_diagrams(ts, cfg.window, cfg.max_order, cfg.weight, &rep.zero_variance_windows);
  rep.diagram_seconds = seconds_since(t0);

  // regroup per order so each quantizer sees one coherent diagram sequence
  std::vector<std::vector<PersistenceDiagram>> by_order(static_cast<std::size_t>(cfg.max_order));
  for (auto& seq : by_order) seq.resize(static_cast<std::size_t>(n));
  for (std::int64_t w = 0; w < n; ++w) {
    for (int d = 0; d < cfg.max_order; ++d) {
      by_order[static_cast<std::size_t>(d)][static_cast<std::size_t>(w)] =
          std::move(per_window[static_cast<std::size_t>(w)][static_cast<std::size_t>(d)]);
    }
  }
  per_window.clear();

  TadaModel model;
  model.window = cfg.window;
  model.n_channels = static_cast<int>(ts.channels());
  model.weight = cfg.weight;
  model.seed = cfg.seed;

  t0 = clock_type::now();
  std::vector<int> live_orders;
  std::vector<std::int64_t> atoms_per_order(static_cast<std::size_t>(cfg.max_order), 0);
  for (int d = 0; d < cfg.max_order; ++d) {
    const auto atoms = mean_measure(
        std::span<const PersistenceDiagram>(by_order[static_cast<std::size_t>(d)]));
    if (atoms.empty()) {
      warn("order " + std::to_string(d) + " produced no diagram points on this data; dropping it");
      rep.dropped_orders.push_back(d);
      continue;
    }
    atoms_per_order[static_cast<std::size_t>(d)] = static_cast<std::int64_t>(atoms.size());
    live_orders.push_back(d);
  }
  require(!live_orders.empty(), ErrorCode::kDegenerate,
          "every homology order came out empty; nothing to embed");
  const bool split = cfg.k_budget == KBudget::kTotal;
  if (split) {
    require(cfg.k >= static_cast<int>(live_orders.size()), ErrorCode::kInvalidArgument,
            "centroid budget " + std::to_string(cfg.k) + " cannot cover " +
                std::to_string(live_orders.size()) + " homology orders");
  }

  // under a total budget, split it evenly with leftovers to the higher orders
  const int share = split ? cfg.k / static_cast<int>(live_orders.size()) : cfg.k;
  const int leftover = split ? cfg.k % static_cast<int>(live_orders.size()) : 0;
  for (std::size_t i = 0; i < live_orders.size(); ++i) {
    const int d = live_orders[i];
    int k_d = share + (static_cast<int>(live_orders.size() - i) <= leftover ? 1 : 0);
    const std::int64_t n_atoms = atoms_per_order[static_cast<std::size_t>(d)];
    if (k_d > n_atoms) {
      warn("order " + std::to_string(d) + ": centroid budget reduced from " + std::to_string(k_d) +
           " to " + std::to_string(n_atoms) + " (distinct support atoms)");
      k_d = static_cast<int>(n_atoms);
    }
    MeasureSequence seq;
    seq.measures =
        std::span<const PersistenceDiagram>(by_order[static_cast<std::size_t>(d)]);
    seq.support_radius = cfg.support_radius;

    QuantizeConfig qc;
    qc.k = k_d;
    qc.t_max = cfg.t_max;
    qc.minibatch_q = cfg.minibatch_q;
    qc.r_projection = cfg.support_radius;
    qc.n_start = cfg.n_start;
    qc.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(d));
    qc.spacing = cfg.spacing;

    const CentroidSet centroids = cfg.quantizer == QuantizerKind::kBatch
                                      ? atol_batch(seq, qc)
                                      : atol_minibatch(seq, qc);
    model.orders.push_back(d);
    model.vectorizers.push_back(build_vectorizer(centroids, cfg.support_radius));
    rep.orders.push_back(d);
    rep.k_per_order.push_back(k_d);
    rep.quantization_cost.push_back(centroids.final_cost);
  }
  rep.quantize_seconds = seconds_since(t0);

  t0 = clock_type::now();
  const int dim = model.dimension();
  Eigen::MatrixXd vectors(n, dim);
  parallel_for(n, [&](std::int64_t w) {
    vectors.row(w) = embed_window(model.orders, model.vectorizers, by_order, w, dim).transpose();
  });
  rep.vectorize_seconds = seconds_since(t0);

  if (cfg.min_variance > 0.0) {
    const Eigen::RowVectorXd mean = vectors.colwise().mean();
    const Eigen::RowVectorXd var = (vectors.rowwise() - mean).array().square().colwise().mean();
    std::vector<char> keep(static_cast<std::size_t>(dim), 1);
    int kept = dim;
    for (int j = 0; j < dim; ++j) {
      if (var[j] < cfg.min_variance) {
        keep[static_cast<std::size_t>(j)] = 0;
        --kept;
      }
    }
    // an entirely flat embedding has nothing worth dropping either
    if (kept == 0) {
      std::fill(keep.begin(), keep.end(), char{1});
      kept = dim;
    }
    if (kept < dim) {
      warn(std::to_string(dim - kept) +
           " embedding coordinates are near-constant over training; dropping them");
      std::vector<int> orders;
      std::vector<Vectorizer> vectorizers;
      std::vector<int> k_per_order;
      std::vector<double> costs;
      int offset = 0;
      for (std::size_t i = 0; i < model.orders.size(); ++i) {
        Vectorizer nv;
        nv.homology_order = model.vectorizers[i].homology_order;
        const int len = model.vectorizers[i].dimension();
        for (int c = 0; c < len; ++c) {
          if (keep[static_cast<std::size_t>(offset + c)]) {
            nv.centers.push_back(model.vectorizers[i].centers[static_cast<std::size_t>(c)]);
            nv.bandwidths.push_back(model.vectorizers[i].bandwidths[static_cast<std::size_t>(c)]);
          }
        }
        offset += len;
        if (nv.centers.empty()) {
          warn("order " + std::to_string(model.orders[i]) +
               " lost all its centers to the variance filter; dropping it");
          rep.dropped_orders.push_back(model.orders[i]);
          continue;
        }
        orders.push_back(model.orders[i]);
        k_per_order.push_back(nv.dimension());
        costs.push_back(rep.quantization_cost[i]);
        vectorizers.push_back(std::move(nv));
      }
      Eigen::MatrixXd filtered(n, kept);
      int out = 0;
      for (int j = 0; j < dim; ++j) {
        if (keep[static_cast<std::size_t>(j)]) filtered.col(out++) = vectors.col(j);
      }
      vectors = std::move(filtered);
      model.orders = std::move(orders);
      model.vectorizers = std::move(vectorizers);
      rep.orders = model.orders;
      rep.k_per_order = std::move(k_per_order);
      rep.quantization_cost = std::move(costs);
    }
  }

  t0 = clock_type::now();
  FitOptions opts;
  opts.seed = cfg.seed;
  model.score_model = cfg.estimator == Estimator::kMcd ? fit_mcd(vectors, cfg.h, opts)
                                                       : fit_plain(vectors, opts);
  rep.score_fit_seconds = seconds_since(t0);

  if (cfg.calibrate) {
    t0 = clock_type::now();
    std::vector<double> scores(static_cast<std::size_t>(n));
    for (std::int64_t w = 0; w < n; ++w) {
      scores[static_cast<std::size_t>(w)] = model.score_model.score(vectors.row(w).transpose());
    }
    const double delta = cfg.delta > 0.0 ? cfg.delta : cfg.alpha / 2.0;
    model.threshold = calibrate_threshold(scores, cfg.alpha, delta);
    rep.calibrate_seconds = seconds_since(t0);
  }
  rep.total_seconds = seconds_since(t_total);
  return model;
}

ScoreSeries score_series(const TadaModel& model, const TimeSeries& ts) {
  ts.validate();
  require(!model.orders.empty() && model.orders.size() == model.vectorizers.size(),
          ErrorCode::kInvalidArgument, "model is not fitted");
  require(model.n_channels == 0 || ts.channels() == model.n_channels,
          ErrorCode::kDimensionMismatch,
          "series has " + std::to_string(ts.channels()) + " channels, model was fitted on " +
              std::to_string(model.n_channels));
  model.window.validate(ts.length());

  const auto windows = slice_windows(ts, model.window);
  const std::int64_t n = static_cast<std::int64_t>(windows.size());
  auto per_window = window_diagrams(ts, model.window, model.rips_order(), model.weight);

  const int dim = model.dimension();
  require(dim == model.score_model.dimension(), ErrorCode::kDimensionMismatch,
          "embedding and score model dimensions disagree");

  ScoreSeries out;
  out.window_scores.resize(static_cast<std::size_t>(n));
  out.window_starts.resize(static_cast<std::size_t>(n));
  out.center_scores.resize(n, dim);
  parallel_for(n, [&](std::int64_t w) {
    const auto& diags = per_window[static_cast<std::size_t>(w)];
    Eigen::VectorXd v(dim);
    int offset = 0;
    for (std::size_t i = 0; i < model.orders.size(); ++i) {
      const int len = model.vectorizers[i].dimension();
      v.segment(offset, len) =
          vectorize(model.vectorizers[i], diags[static_cast<std::size_t>(model.orders[i])]);
      offset += len;
    }
    out.window_scores[static_cast<std::size_t>(w)] = model.score_model.score(v);
    out.center_scores.row(w) = model.score_model.center_scores(v).transpose();
    out.window_starts[static_cast<std::size_t>(w)] = windows[static_cast<std::size_t>(w)].begin;
  });

  out.timestamp_scores = reverse_windows(out.window_scores, out.window_starts,
                                         model.window.delta, ts.length(),
                                         &out.uncovered_timestamps);
  return out;
}

std::vector<double> reverse_windows(std::span<const double> window_scores,
                                    std::span<const std::int64_t> window_starts,
                                    std::int64_t delta, std::int64_t length,
                                    std::int64_t* uncovered) {
  require(window_scores.size() == window_starts.size(), ErrorCode::kDimensionMismatch,
          "one start per window score");
  require(delta >= 1, ErrorCode::kInvalidArgument, "window length must be positive");
  require(length >= 0, ErrorCode::kInvalidArgument, "series length must be nonnegative");

  std::vector<double> out(static_cast<std::size_t>(length), 0.0);
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(length), 0);
  // ascending window order keeps the per-timestamp sums reproducible
  for (std::size_t w = 0; w < window_scores.size(); ++w) {
    const std::int64_t start = window_starts[w];
    require(start >= 0 && start + delta <= length, ErrorCode::kInvalidArgument,
            "window " + std::to_string(w) + " extends past the series");
    for (std::int64_t t = start; t < start + delta; ++t) {
      out[static_cast<std::size_t>(t)] += window_scores[w];
      covered[static_cast<std::size_t>(t)] = 1;
    }
  }
  std::int64_t missed = 0;
  for (auto c : covered) missed += (c == 0);
  if (uncovered) *uncovered = missed;
  if (missed > 0) {
    warn(std::to_string(missed) + " timestamps are covered by no window and keep score 0");
  }
  return out;
}

void save_model(const TadaModel& model, const std::string& path) {
  require(!model.orders.empty() && model.orders.size() == model.vectorizers.size(),
          ErrorCode::kInvalidArgument, "model is not fitted");
  require(model.dimension() == model.score_model.dimension(), ErrorCode::kDimensionMismatch,
          "embedding and score model dimensions disagree");

  json j;
  j["version"] = 1;
  j["n_channels"] = model.n_channels;
  j["window"] = json{{"delta", model.window.delta}, {"stride", model.window.stride}};
  j["orders"] = model.orders;

  json centers = json::array();
  json bandwidths = json::array();
  for (const auto& v : model.vectorizers) {
    json cs = json::array();
    for (const auto& [x, y] : v.centers) cs.push_back(json::array({x, y}));
    centers.push_back(std::move(cs));
    bandwidths.push_back(v.bandwidths);
  }
  j["centers"] = std::move(centers);
  j["bandwidths"] = std::move(bandwidths);

  const auto& sm = model.score_model;
  j["mu"] = std::vector<double>(sm.mu.data(), sm.mu.data() + sm.mu.size());
  json sigma = json::array();
  for (Eigen::Index r = 0; r < sm.sigma.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < sm.sigma.cols(); ++c) row.push_back(sm.sigma(r, c));
    sigma.push_back(std::move(row));
  }
  j["sigma"] = std::move(sigma);
  j["h"] = sm.h;
  j["c0"] = sm.c0;
  j["weight"] = model.weight == DiagramWeight::kPersistence ? "persistence" : "constant";
  if (model.threshold) {
    j["threshold"] = json{{"t_hat", model.threshold->t_hat},
                          {"alpha", model.threshold->alpha},
                          {"delta", model.threshold->delta}};
  }
  j["seed"] = model.seed;

  std::ofstream f(path, std::ios::binary);
  require(f.good(), ErrorCode::kIo, "cannot write " + path);
  f << j.dump(2) << '\n';
  require(f.good(), ErrorCode::kIo, "write failed for " + path);
}

TadaModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorCode::kCorruptFile, path + ": " + e.what());
  }
  require(j.is_object(), ErrorCode::kCorruptFile, path + ": not a model file");
  require(j.contains("version") && j["version"].is_number_integer(), ErrorCode::kCorruptFile,
          path + ": missing format version");
  const int version = j["version"].get<int>();
  require(version == 1, ErrorCode::kVersionMismatch,
          path + ": format version " + std::to_string(version) + " is not supported (expected 1)");

  TadaModel model;
  try {
    model.n_channels = j.at("n_channels").get<int>();
    model.window.delta = j.at("window").at("delta").get<std::int64_t>();
    model.window.stride = j.at("window").at("stride").get<std::int64_t>();
    model.orders = j.at("orders").get<std::vector<int>>();
    model.seed = j.at("seed").get<std::uint64_t>();

    const auto& centers = j.at("centers");
    const auto& bandwidths = j.at("bandwidths");
    require(centers.is_array() && bandwidths.is_array() &&
                centers.size() == model.orders.size() && bandwidths.size() == model.orders.size(),
            ErrorCode::kCorruptFile, path + ": centers/bandwidths do not match the order list");
    for (std::size_t i = 0; i < model.orders.size(); ++i) {
      Vectorizer v;
      v.homology_order = model.orders[i];
      for (const auto& c : centers[i]) {
        require(c.is_array() && c.size() == 2, ErrorCode::kCorruptFile,
                path + ": malformed center");
        v.centers.emplace_back(c[0].get<double>(), c[1].get<double>());
      }
      v.bandwidths = bandwidths[i].get<std::vector<double>>();
      require(!v.centers.empty() && v.centers.size() == v.bandwidths.size(),
              ErrorCode::kCorruptFile, path + ": center/bandwidth mismatch");
      for (double b : v.bandwidths) {
        require(std::isfinite(b) && b > 0.0, ErrorCode::kCorruptFile,
                path + ": bandwidths must be positive");
      }
      model.vectorizers.push_back(std::move(v));
    }

    const auto mu_vec = j.at("mu").get<std::vector<double>>();
    const auto& sigma_json = j.at("sigma");
    const std::size_t dim = mu_vec.size();
    require(sigma_json.is_array() && sigma_json.size() == dim, ErrorCode::kCorruptFile,
            path + ": sigma shape does not match mu");
    Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(mu_vec.data(), static_cast<Eigen::Index>(dim));
    Eigen::MatrixXd sigma(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      const auto row = sigma_json[r].get<std::vector<double>>();
      require(row.size() == dim, ErrorCode::kCorruptFile, path + ": sigma is not square");
      for (std::size_t c = 0; c < dim; ++c) sigma(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }

    const double h = j.at("h").get<double>();
    const double c0 = j.at("c0").get<double>();
    try {
      model.score_model = from_moments(mu, sigma);
    } catch (const Error& e) {
      fail(ErrorCode::kCorruptFile, path + ": inconsistent score moments (" + e.what() + ")");
    }
    model.score_model.h = h;
    model.score_model.c0 = c0;
    model.score_model.estimator = h > 0.0 ? Estimator::kMcd : Estimator::kPlain;

    if (j.contains("weight")) {
      const auto w = j.at("weight").get<std::string>();
      require(w == "constant" || w == "persistence", ErrorCode::kCorruptFile,
              path + ": unknown diagram weight '" + w + "'");
      model.weight = w == "persistence" ? DiagramWeight::kPersistence : DiagramWeight::kConstantOne;
    }

    if (j.contains("threshold")) {
      Threshold t;
      t.t_hat = j.at("threshold").at("t_hat").get<double>();
      t.alpha = j.at("threshold").at("alpha").get<double>();
      t.delta = j.at("threshold").at("delta").get<double>();
      model.threshold = t;
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kCorruptFile, path + ": " + e.what());
  }

  require(model.n_channels >= 2, ErrorCode::kCorruptFile, path + ": bad channel count");
  require(model.window.delta >= 2 && model.window.stride >= 1, ErrorCode::kCorruptFile,
          path + ": bad window geometry");
  require(!model.orders.empty(), ErrorCode::kCorruptFile, path + ": no homology orders");
  for (std::size_t i = 0; i < model.orders.size(); ++i) {
    require(model.orders[i] >= 0 && (i == 0 || model.orders[i] > model.orders[i - 1]),
            ErrorCode::kCorruptFile, path + ": orders must be ascending and nonnegative");
  }
  require(model.rips_order() <= model.n_channels - 1, ErrorCode::kCorruptFile,
          path + ": orders exceed what the channel count supports");
  require(model.dimension() == model.score_model.dimension(), ErrorCode::kCorruptFile,
          path + ": embedding and score dimensions disagree");
  return model;
}

}  // namespace tada
