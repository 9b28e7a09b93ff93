#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tada/persistence.hpp"

namespace tada {

// Weighted atom of the empirical mean measure.
struct WeightedAtom {
  double x = 0.0;
  double y = 0.0;
  double mass = 0.0;
};

// Support of the empirical mean measure (1/n) * sum of the diagrams, with
// exactly coinciding points aggregated and atoms sorted by (x, y). The sort
// makes every downstream seeded draw independent of diagram point order.
std::vector<WeightedAtom> mean_measure(std::span<const PersistenceDiagram> measures);

// A sequence of diagrams of one homology order together with its boundedness
// envelope. support_radius doubles as the minibatch projection radius; the
// other bounds are informational.
struct MeasureSequence {
  std::span<const PersistenceDiagram> measures;
  double support_radius = 4.0;       // R: every point lies in ball(0, R)
  double mass_bound = 0.0;           // M, 0 = unknown
  std::int64_t support_bound = 0;    // N_max, 0 = unknown

  std::int64_t size() const { return static_cast<std::int64_t>(measures.size()); }
};

enum class MinibatchSpacing {
  kPaper,  // minibatch groups of four, mass from the 1st, update from the 3rd
  kDense,  // consecutive pairs, mass from the 1st, update from the 2nd
};

struct QuantizeConfig {
  int k = 10;
  int t_max = 0;                 // batch Lloyd iterations; 0 = 2 * ceil(ln n)
  std::int64_t minibatch_q = 0;  // minibatch size; 0 = ceil(n / 40)
  double r_projection = 4.0;     // minibatch update projection radius
  int n_start = 10;              // random restarts, best kept by cost
  std::uint64_t seed = 0;
  MinibatchSpacing spacing = MinibatchSpacing::kDense;
};

struct CentroidSet {
  std::vector<std::pair<double, double>> centers;
  int homology_order = 0;
  int restarts_used = 0;
  double final_cost = 0.0;
};

// Per-restart Lloyd trajectory: cost after each iteration and whether the
// iteration re-sampled an empty cell. Exposed for monotonicity checks.
struct BatchTrace {
  std::vector<double> costs;
  std::vector<bool> resampled;
};

// Batch Lloyd on the empirical mean measure. Initial centers are drawn from
// the support with probability proportional to mass (distinct atoms); empty
// cells are re-filled by drawing a fresh support atom. n_start restarts run
// on derived seeds and the lowest final cost wins (ties: lowest restart
// index). Exact duplicate centers after convergence are re-sampled away.
CentroidSet atol_batch(const MeasureSequence& seq, const QuantizeConfig& cfg,
                       std::vector<BatchTrace>* traces = nullptr);

// Streaming variant: one pass over the measure sequence in minibatches of
// size q. Each step reads the cell masses from one minibatch and the cell
// integrals from a later one, then projects the updated centers onto
// ball(0, r_projection). Cells with zero mass carry their center over.
CentroidSet atol_minibatch(const MeasureSequence& seq, const QuantizeConfig& cfg);

// Mean quantization error: integral of the squared distance to the nearest
// center against the empirical mean measure.
double quantization_cost(const MeasureSequence& seq, const CentroidSet& centroids);

// Iteration budget used when QuantizeConfig.t_max is 0.
int default_batch_iterations(std::int64_t n_measures);

// Minibatch size used when QuantizeConfig.minibatch_q is 0.
std::int64_t default_minibatch_q(std::int64_t n_measures);

}  // namespace tada
