#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "tada/timeseries.hpp"

namespace tada {

enum class WheelMode { kTypeI, kTypeII };

// Latent dependency graph over channels. Each edge carries an independent
// AR(2) factor; a channel is the sum of the factors of its incident edges
// plus white noise, so exactly the channel pairs joined by an edge end up
// correlated.
struct LatentGraph {
  int n_channels = 0;
  std::vector<std::pair<int, int>> edges;
};

// AR(2) with a spectral peak at peak_freq_hz: phi1 = 2 cos(2 pi f/fs) / M,
// phi2 = -1/M^2, poles at modulus 1/M (stationary for M > 1).
struct Ar2Params {
  double peak_freq_hz = 10.0;
  double modulus = 1.01;
  double sample_rate = 500.0;

  double phi1() const;
  double phi2() const;
  void validate() const;
};

struct WheelSpec {
  int n_channels = 64;
  double sample_rate = 500.0;
  double duration_s = 20.0;
  std::int64_t anomaly_len = 500;
  std::optional<std::int64_t> anomaly_start;  // uniform over valid starts when unset
  std::uint64_t seed = 0;
  double ar2_peak_freq = 10.0;
  double ar2_modulus = 1.01;
  double noise_std = 1.0;
};

// Canonical wheel layout over D channels (D even, at least 8). Channels
// 2i, 2i+1 form pair i; the pairs split into two rings that are joined at
// one junction, giving a figure eight:
//
//      1 - 2             9 - 10
//    0       3         8       11
//    |  ring A  - 0 ~ 8  ring B |        (D = 16; pair edges drawn vertical,
//    7       4        15       12         ~ is the junction)
//      6 - 5            14 - 13
//
// A connection from pair a to pair b is the channel edge (2a+1, 2b). Rings
// of two pairs collapse to a single connection. Type II adds exactly one
// extra pair-to-pair connection between the ring midpoints, which is the
// structural change the anomaly injects.
LatentGraph build_wheel_graph(int n_channels, WheelMode mode);

// Series of length sample_rate * duration_s mixing the type I factors, with
// one window of anomaly_len timestamps driven by the type II graph. Labels
// mark that window.
TimeSeries generate_wheels(const WheelSpec& spec);

// Pure mode without any anomaly window; labels are all zero.
TimeSeries generate_wheels_mode(const WheelSpec& spec, WheelMode mode);

// Mixes one latent graph directly; exposed so the construction is testable
// at channel level (shared factor => correlation, no shared factor => none).
TimeSeries mix_latent_ar2(const LatentGraph& g, std::int64_t length, const Ar2Params& params,
                          double noise_std, std::uint64_t seed);

struct Ar1Spec {
  int n_channels = 4;
  std::int64_t length = 2000;
  double phi = 0.9;  // 0 gives white-noise channels
  double noise_std = 1.0;
  std::vector<std::int64_t> anomaly_positions;
  std::vector<double> magnitudes;  // additive spike per position, all channels
  std::uint64_t seed = 0;
};

// Independent AR(1) channels with additive point anomalies; labels are 1 at
// exactly the spike timestamps.
TimeSeries generate_ar1_pointanomaly(const Ar1Spec& spec);

}  // namespace tada
