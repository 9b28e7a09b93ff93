#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tada/persistence.hpp"
#include "tada/quantization.hpp"
#include "tada/scoring.hpp"
#include "tada/timeseries.hpp"
#include "tada/vectorization.hpp"

namespace tada {

enum class QuantizerKind { kBatch, kMinibatch };

// How the centroid budget k is spent. kPerOrder hands every homology order
// k centroids of its own; kTotal splits k as evenly as possible across the
// orders that produce diagram points. Leftovers go to the higher orders:
// order 0 diagrams sit on a line (every birth is zero) while higher orders
// spread over the whole birth-death plane, so a spare centroid buys more
// resolution at the top. The total reading also keeps the embedding small,
// and with it the kernel bandwidths wide enough that diagram points moving
// a little under sampling noise stay visible to the same coordinate instead
// of falling between two narrow kernels.
enum class KBudget { kPerOrder, kTotal };

struct PipelineConfig {
  WindowConfig window{};  // delta 100, stride 10
  int max_order = 2;      // homology orders 0..max_order-1
  int k = 10;             // centroid budget, interpreted per k_budget
  KBudget k_budget = KBudget::kPerOrder;
  double h = 0.1;         // contamination level for the robust fit
  int n_start = 10;
  std::uint64_t seed = 0;
  QuantizerKind quantizer = QuantizerKind::kBatch;
  std::int64_t minibatch_q = 0;  // 0: one fortieth of the window count
  MinibatchSpacing spacing = MinibatchSpacing::kDense;
  int t_max = 0;  // batch iterations, 0: 2 ceil(ln n)
  double support_radius = 4.0;
  Estimator estimator = Estimator::kMcd;
  // Mass each diagram point carries into quantization and vectorization.
  // Constant mass treats every feature alike; persistence mass lets durable
  // loops outvote near-diagonal noise, which matters when the signal is one
  // extra persistent class among many short-lived ones.
  DiagramWeight weight = DiagramWeight::kConstantOne;
  // Drop embedding coordinates whose mass variance over the training windows
  // falls below this floor (0 keeps everything). Coordinates that barely move
  // on training data say nothing about the normal regime, but the tiniest
  // test-time stir in one of them dominates the Mahalanobis distance, so they
  // are better removed than regularized.
  double min_variance = 0.0;
  bool calibrate = false;
  double alpha = 0.05;
  double delta = 0.0;  // exceedance slack, 0: alpha/2
};

// Everything needed to score new series: the window layout, one vectorizer
// per kept homology order, and the fitted score model. Orders whose diagrams
// were empty on the training data are dropped at fit time.
struct TadaModel {
  WindowConfig window{};
  int n_channels = 0;
  std::vector<int> orders;              // kept orders, ascending
  std::vector<Vectorizer> vectorizers;  // parallel to orders
  ScoreModel score_model;
  std::optional<Threshold> threshold;
  DiagramWeight weight = DiagramWeight::kConstantOne;
  std::uint64_t seed = 0;

  int dimension() const {
    int d = 0;
    for (const auto& v : vectorizers) d += v.dimension();
    return d;
  }
  // Order budget scoring has to request from the filtration.
  int rips_order() const { return orders.empty() ? 1 : orders.back() + 1; }
};

struct ScoreSeries {
  std::vector<double> window_scores;
  std::vector<std::int64_t> window_starts;
  // timestamp score = sum of the scores of the windows containing it, so a
  // timestamp covered by c windows saturates at c times the window level
  std::vector<double> timestamp_scores;
  Eigen::MatrixXd center_scores;  // per window, one column per embedding coordinate
  std::int64_t uncovered_timestamps = 0;
};

struct FitReport {
  std::int64_t n_windows = 0;
  int n_channels = 0;
  std::vector<int> orders;
  std::vector<int> k_per_order;
  std::vector<double> quantization_cost;
  std::vector<int> dropped_orders;
  std::int64_t zero_variance_windows = 0;
  double diagram_seconds = 0.0;
  double quantize_seconds = 0.0;
  double vectorize_seconds = 0.0;
  double score_fit_seconds = 0.0;
  double calibrate_seconds = 0.0;
  double total_seconds = 0.0;
};

TadaModel fit(const TimeSeries& ts, const PipelineConfig& cfg, FitReport* report = nullptr);

ScoreSeries score_series(const TadaModel& model, const TimeSeries& ts);

// Per-window correlation graph diagrams, orders 0..max_order-1, computed in
// parallel across windows.
std::vector<std::vector<PersistenceDiagram>> window_diagrams(
    const TimeSeries& ts, const WindowConfig& window, int max_order,
    DiagramWeight weight = DiagramWeight::kConstantOne,
    std::int64_t* zero_variance_windows = nullptr);

// Spread window scores back over timestamps: each timestamp accumulates, in
// window order, the score of every window containing it. Timestamps no
// window covers stay 0 and are counted (and warned about).
std::vector<double> reverse_windows(std::span<const double> window_scores,
                                    std::span<const std::int64_t> window_starts,
                                    std::int64_t delta, std::int64_t length,
                                    std::int64_t* uncovered = nullptr);

// Versioned JSON, small and independent of training length. load_model
// rejects files from newer format versions and anything structurally off.
void save_model(const TadaModel& model, const std::string& path);
TadaModel load_model(const std::string& path);

}  // namespace tada
