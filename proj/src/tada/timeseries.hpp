#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "tada/error.hpp"

namespace tada {

// Multivariate series, one row per timestamp and one column per channel.
struct TimeSeries {
  Eigen::MatrixXd values;             // L x D
  std::optional<double> sample_rate;  // Hz, when known
  std::vector<std::uint8_t> labels;   // empty, or length L with 1 = anomalous

  std::int64_t length() const { return values.rows(); }
  std::int64_t channels() const { return values.cols(); }
  bool has_labels() const { return !labels.empty(); }

  // L >= 2, D >= 2, finite values, label vector empty or of length L.
  void validate() const;
};

struct WindowConfig {
  std::int64_t delta = 100;  // window length
  std::int64_t stride = 10;

  void validate(std::int64_t series_length) const;
};

// Half-open slice [begin, end) of the series.
struct WindowRange {
  std::int64_t begin = 0;
  std::int64_t end = 0;
  std::int64_t index = 0;
};

// Pairwise dissimilarity of the channels inside one window: 1 - Pearson
// correlation, so values live in [0, 2] with 0 on the diagonal.
struct SimilarityMatrix {
  Eigen::MatrixXd weights;
  std::int64_t window_index = 0;
  int zero_variance_channels = 0;
};

// Windows start at multiples of the stride; the last one is the largest t
// with t * stride + delta <= L, i.e. t ranges over [0, (L - delta) / stride].
std::vector<WindowRange> slice_windows(const TimeSeries& ts, const WindowConfig& cfg);

// Pearson correlation uses the window-length (population) normalization; the
// factor cancels in the ratio. A constant channel has no defined correlation:
// it is treated as uncorrelated (weight 1 off-diagonal) and counted in
// zero_variance_channels.
SimilarityMatrix similarity(const TimeSeries& ts, const WindowRange& range);

}  // namespace tada
