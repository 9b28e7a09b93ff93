#include "tada/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tada/error.hpp"
#include "tada/rng.hpp"

namespace tada {

namespace {

constexpr std::int64_t kBurnIn = 2000;

// Independent standard-normal innovations, one stream per salt.
std::vector<double> ar2_series(std::int64_t length, double phi1, double phi2,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NormalDraw normal;
  double prev1 = 0.0, prev2 = 0.0;
  for (std::int64_t t = 0; t < kBurnIn; ++t) {
    double x = phi1 * prev1 + phi2 * prev2 + normal(rng);
    prev2 = prev1;
    prev1 = x;
  }
  std::vector<double> out(static_cast<std::size_t>(length));
  for (std::int64_t t = 0; t < length; ++t) {
    double x = phi1 * prev1 + phi2 * prev2 + normal(rng);
    prev2 = prev1;
    prev1 = x;
    out[static_cast<std::size_t>(t)] = x;
  }
  return out;
}

std::vector<double> noise_series(std::int64_t length, double std_dev, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NormalDraw normal;
  std::vector<double> out(static_cast<std::size_t>(length));
  for (std::int64_t t = 0; t < length; ++t) out[static_cast<std::size_t>(t)] = std_dev * normal(rng);
  return out;
}

// Factor streams get salts disjoint from noise streams so adding an edge
// never reshuffles the noise.
std::uint64_t factor_seed(std::uint64_t seed, std::size_t edge_index) {
  return mix_seed(seed, 0x100 + static_cast<std::uint64_t>(edge_index));
}
std::uint64_t noise_seed(std::uint64_t seed, int channel) {
  return mix_seed(seed, 0x10000 + static_cast<std::uint64_t>(channel));
}

}  // namespace

double Ar2Params::phi1() const {
  return 2.0 * std::cos(2.0 * M_PI * peak_freq_hz / sample_rate) / modulus;
}

double Ar2Params::phi2() const { return -1.0 / (modulus * modulus); }

void Ar2Params::validate() const {
  require(std::isfinite(peak_freq_hz) && peak_freq_hz >= 0.0, ErrorCode::kInvalidArgument,
          "AR(2) peak frequency must be finite and nonnegative");
  require(std::isfinite(sample_rate) && sample_rate > 0.0, ErrorCode::kInvalidArgument,
          "sample rate must be positive");
  require(peak_freq_hz < 0.5 * sample_rate, ErrorCode::kInvalidArgument,
          "AR(2) peak frequency must be below the Nyquist frequency");
  // Poles sit at modulus 1/M; M <= 1 is non-stationary and the burn-in
  // would diverge.
  require(std::isfinite(modulus) && modulus > 1.0, ErrorCode::kInvalidArgument,
          "AR(2) pole modulus parameter must exceed 1 for stationarity");
}

LatentGraph build_wheel_graph(int n_channels, WheelMode mode) {
  require(n_channels >= 8 && n_channels % 2 == 0, ErrorCode::kInvalidArgument,
          "wheel graph needs an even channel count of at least 8");
  const int n_pairs = n_channels / 2;
  const int ring_a = (n_pairs + 1) / 2;  // pairs [0, ring_a), rest ring B
  const int ring_b = n_pairs - ring_a;

  LatentGraph g;
  g.n_channels = n_channels;
  auto connect = [&g](int pair_a, int pair_b) {
    g.edges.emplace_back(2 * pair_a + 1, 2 * pair_b);
  };

  for (int i = 0; i < n_pairs; ++i) g.edges.emplace_back(2 * i, 2 * i + 1);

  auto ring = [&connect](int offset, int size) {
    if (size == 2) {
      connect(offset, offset + 1);
    } else if (size >= 3) {
      for (int k = 0; k < size; ++k) connect(offset + k, offset + (k + 1) % size);
    }
  };
  ring(0, ring_a);
  ring(ring_a, ring_b);

  connect(0, ring_a);  // junction between the rings

  if (mode == WheelMode::kTypeII) {
    // one extra spoke between the ring midpoints, away from the junction
    connect(ring_a / 2, ring_a + ring_b / 2);
  }
  return g;
}

TimeSeries mix_latent_ar2(const LatentGraph& g, std::int64_t length, const Ar2Params& params,
                          double noise_std, std::uint64_t seed) {
  params.validate();
  require(g.n_channels >= 2, ErrorCode::kInvalidArgument, "latent graph needs at least 2 channels");
  require(length >= 2, ErrorCode::kInvalidArgument, "series length must be at least 2");
  require(std::isfinite(noise_std) && noise_std >= 0.0, ErrorCode::kInvalidArgument,
          "noise level must be finite and nonnegative");
  for (const auto& [a, b] : g.edges) {
    require(a >= 0 && a < g.n_channels && b >= 0 && b < g.n_channels && a != b,
            ErrorCode::kInvalidArgument, "latent edge endpoint out of range");
  }

  const double phi1 = params.phi1();
  const double phi2 = params.phi2();
  TimeSeries ts;
  ts.values = Eigen::MatrixXd::Zero(length, g.n_channels);
  ts.sample_rate = params.sample_rate;

  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto factor = ar2_series(length, phi1, phi2, factor_seed(seed, e));
    for (int endpoint : {g.edges[e].first, g.edges[e].second}) {
      for (std::int64_t t = 0; t < length; ++t) {
        ts.values(t, endpoint) += factor[static_cast<std::size_t>(t)];
      }
    }
  }
  for (int c = 0; c < g.n_channels; ++c) {
    const auto noise = noise_series(length, noise_std, noise_seed(seed, c));
    for (std::int64_t t = 0; t < length; ++t) ts.values(t, c) += noise[static_cast<std::size_t>(t)];
  }
  return ts;
}

namespace {

TimeSeries generate_wheels_impl(const WheelSpec& spec, bool with_anomaly, WheelMode pure_mode) {
  Ar2Params params{spec.ar2_peak_freq, spec.ar2_modulus, spec.sample_rate};
  params.validate();
  require(std::isfinite(spec.duration_s) && spec.duration_s > 0.0, ErrorCode::kInvalidArgument,
          "duration must be positive");
  require(std::isfinite(spec.noise_std) && spec.noise_std >= 0.0, ErrorCode::kInvalidArgument,
          "noise level must be finite and nonnegative");
  const std::int64_t length = std::llround(spec.sample_rate * spec.duration_s);
  require(length >= 2, ErrorCode::kInvalidArgument, "series is too short");

  const LatentGraph base = build_wheel_graph(spec.n_channels, WheelMode::kTypeI);
  const LatentGraph full = build_wheel_graph(spec.n_channels, WheelMode::kTypeII);

  std::int64_t win_start = 0, win_len = 0;
  if (with_anomaly) {
    win_len = spec.anomaly_len;
    require(win_len >= 0 && win_len <= length, ErrorCode::kInvalidArgument,
            "anomaly window does not fit in the series");
    if (spec.anomaly_start) {
      win_start = *spec.anomaly_start;
      require(win_start >= 0 && win_start + win_len <= length, ErrorCode::kInvalidArgument,
              "anomaly window does not fit in the series");
    } else {
      std::mt19937_64 rng(mix_seed(spec.seed, 1));
      const std::int64_t n_starts = length - win_len + 1;
      win_start = std::min<std::int64_t>(static_cast<std::int64_t>(uniform01(rng) * n_starts),
                                         n_starts - 1);
    }
  }

  // Type II edges extend the type I list, so factor streams line up across
  // both graphs and the two regimes differ only by the extra factor.
  const LatentGraph& active =
      with_anomaly ? full : (pure_mode == WheelMode::kTypeII ? full : base);
  const std::size_t n_base = base.edges.size();

  const double phi1 = params.phi1();
  const double phi2 = params.phi2();
  TimeSeries ts;
  ts.values = Eigen::MatrixXd::Zero(length, spec.n_channels);
  ts.sample_rate = spec.sample_rate;
  ts.labels.assign(static_cast<std::size_t>(length), 0);

  for (std::size_t e = 0; e < active.edges.size(); ++e) {
    const auto factor = ar2_series(length, phi1, phi2, factor_seed(spec.seed, e));
    const bool extra = with_anomaly && e >= n_base;
    const std::int64_t t0 = extra ? win_start : 0;
    const std::int64_t t1 = extra ? win_start + win_len : length;
    for (int endpoint : {active.edges[e].first, active.edges[e].second}) {
      for (std::int64_t t = t0; t < t1; ++t) {
        ts.values(t, endpoint) += factor[static_cast<std::size_t>(t)];
      }
    }
  }
  for (int c = 0; c < spec.n_channels; ++c) {
    const auto noise = noise_series(length, spec.noise_std, noise_seed(spec.seed, c));
    for (std::int64_t t = 0; t < length; ++t) ts.values(t, c) += noise[static_cast<std::size_t>(t)];
  }
  if (with_anomaly) {
    for (std::int64_t t = win_start; t < win_start + win_len; ++t) {
      ts.labels[static_cast<std::size_t>(t)] = 1;
    }
  }
  return ts;
}

}  // namespace

TimeSeries generate_wheels(const WheelSpec& spec) {
  return generate_wheels_impl(spec, true, WheelMode::kTypeI);
}

TimeSeries generate_wheels_mode(const WheelSpec& spec, WheelMode mode) {
  return generate_wheels_impl(spec, false, mode);
}

TimeSeries generate_ar1_pointanomaly(const Ar1Spec& spec) {
  require(spec.n_channels >= 2, ErrorCode::kInvalidArgument, "need at least 2 channels");
  require(spec.length >= 2, ErrorCode::kInvalidArgument, "series length must be at least 2");
  require(std::isfinite(spec.phi) && std::abs(spec.phi) < 1.0, ErrorCode::kInvalidArgument,
          "AR(1) coefficient must have absolute value below 1");
  require(std::isfinite(spec.noise_std) && spec.noise_std >= 0.0, ErrorCode::kInvalidArgument,
          "noise level must be finite and nonnegative");
  require(spec.anomaly_positions.size() == spec.magnitudes.size(), ErrorCode::kDimensionMismatch,
          "one magnitude per anomaly position");
  for (std::int64_t pos : spec.anomaly_positions) {
    require(pos >= 0 && pos < spec.length, ErrorCode::kInvalidArgument,
            "anomaly position out of range");
  }

  TimeSeries ts;
  ts.values.resize(spec.length, spec.n_channels);
  ts.labels.assign(static_cast<std::size_t>(spec.length), 0);
  for (int c = 0; c < spec.n_channels; ++c) {
    std::mt19937_64 rng(noise_seed(spec.seed, c));
    NormalDraw normal;
    double prev = 0.0;
    for (std::int64_t t = 0; t < kBurnIn; ++t) prev = spec.phi * prev + spec.noise_std * normal(rng);
    for (std::int64_t t = 0; t < spec.length; ++t) {
      prev = spec.phi * prev + spec.noise_std * normal(rng);
      ts.values(t, c) = prev;
    }
  }
  for (std::size_t i = 0; i < spec.anomaly_positions.size(); ++i) {
    const std::int64_t pos = spec.anomaly_positions[i];
    require(std::isfinite(spec.magnitudes[i]), ErrorCode::kNonFinite, "spike magnitude must be finite");
    for (int c = 0; c < spec.n_channels; ++c) ts.values(pos, c) += spec.magnitudes[i];
    ts.labels[static_cast<std::size_t>(pos)] = 1;
  }
  return ts;
}

}  // namespace tada
