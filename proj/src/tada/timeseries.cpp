#include "tada/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tada {

void TimeSeries::validate() const {
  require(length() >= 2, ErrorCode::kTooFewSamples,
          "time series needs at least 2 timestamps, got " + std::to_string(length()));
  require(channels() >= 2, ErrorCode::kInvalidArgument,
          "time series needs at least 2 channels, got " + std::to_string(channels()));
  require(values.allFinite(), ErrorCode::kNonFinite, "time series contains non-finite values");
  require(labels.empty() || static_cast<std::int64_t>(labels.size()) == length(),
          ErrorCode::kDimensionMismatch, "label vector length does not match series length");
}

void WindowConfig::validate(std::int64_t series_length) const {
  require(delta >= 2, ErrorCode::kInvalidArgument,
          "window length must be at least 2, got " + std::to_string(delta));
  require(stride >= 1, ErrorCode::kInvalidArgument,
          "stride must be positive, got " + std::to_string(stride));
  require(delta <= series_length, ErrorCode::kInvalidArgument,
          "window length " + std::to_string(delta) + " exceeds series length " +
              std::to_string(series_length));
}

std::vector<WindowRange> slice_windows(const TimeSeries& ts, const WindowConfig& cfg) {
  ts.validate();
  cfg.validate(ts.length());
  const std::int64_t last = (ts.length() - cfg.delta) / cfg.stride;
  std::vector<WindowRange> out;
  out.reserve(static_cast<std::size_t>(last + 1));
  for (std::int64_t t = 0; t <= last; ++t) {
    out.push_back({t * cfg.stride, t * cfg.stride + cfg.delta, t});
  }
  return out;
}

// The reductions below are plain sequential loops on purpose: the result for
// a channel pair must not depend on where the channels sit in the matrix, so
// permuting channels permutes the weight matrix bit-exactly.
SimilarityMatrix similarity(const TimeSeries& ts, const WindowRange& range) {
  const std::int64_t d = ts.channels();
  require(range.begin >= 0 && range.begin < range.end && range.end <= ts.length(),
          ErrorCode::kInvalidArgument, "window range out of bounds");
  const std::int64_t len = range.end - range.begin;

  SimilarityMatrix sim;
  sim.window_index = range.index;
  sim.weights = Eigen::MatrixXd::Zero(d, d);

  // One contiguous row per centered channel.
  std::vector<double> centered(static_cast<std::size_t>(d * len));
  std::vector<double> sq(static_cast<std::size_t>(d));
  std::vector<bool> constant(static_cast<std::size_t>(d));
  for (std::int64_t c = 0; c < d; ++c) {
    double lo = ts.values(range.begin, c);
    double hi = lo;
    double sum = 0.0;
    for (std::int64_t t = 0; t < len; ++t) {
      const double v = ts.values(range.begin + t, c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    // Exact constancy test; near-constant channels keep their correlation.
    constant[static_cast<std::size_t>(c)] = lo == hi;
    if (lo == hi) ++sim.zero_variance_channels;
    const double mean = sum / static_cast<double>(len);
    double* row = centered.data() + c * len;
    double s2 = 0.0;
    for (std::int64_t t = 0; t < len; ++t) {
      row[t] = ts.values(range.begin + t, c) - mean;
      s2 += row[t] * row[t];
    }
    sq[static_cast<std::size_t>(c)] = s2;
  }

  for (std::int64_t i = 0; i < d; ++i) {
    const double* ri = centered.data() + i * len;
    for (std::int64_t j = i + 1; j < d; ++j) {
      const double* rj = centered.data() + j * len;
      double corr = 0.0;
      if (!constant[static_cast<std::size_t>(i)] && !constant[static_cast<std::size_t>(j)]) {
        double dot = 0.0;
        for (std::int64_t t = 0; t < len; ++t) dot += ri[t] * rj[t];
        corr = dot / std::sqrt(sq[static_cast<std::size_t>(i)] * sq[static_cast<std::size_t>(j)]);
        corr = std::clamp(corr, -1.0, 1.0);
      }
      const double w = 1.0 - corr;
      sim.weights(i, j) = w;
      sim.weights(j, i) = w;
    }
  }
  return sim;
}

}  // namespace tada
