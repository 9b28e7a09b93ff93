#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tada/error.hpp"

namespace tada {

// Complete weighted graph with a filtration range. All edge weights must lie
// in [alpha_min, alpha_max]; for correlation graphs that range is [0, 2].
struct FilteredGraph {
  Eigen::MatrixXd weights;  // symmetric D x D, zero diagonal
  double alpha_min = 0.0;
  double alpha_max = 2.0;

  int n_vertices() const { return static_cast<int>(weights.rows()); }
  void validate() const;
};

// How unbounded intervals are turned into points. There is a single policy:
// essential classes are closed at alpha_max.
enum class EssentialPolicy { kCloseAtAlphaMax };

enum class DiagramWeight {
  kConstantOne,  // every point carries mass 1
  kPersistence,  // mass death - birth
};

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  double weight = 1.0;
};

// Order-d persistence diagram, stored as a weighted discrete measure. Points
// are kept sorted by (birth, death, weight) so equal multisets compare (and
// later accumulate) identically. Zero-persistence pairs are dropped.
struct PersistenceDiagram {
  std::vector<DiagramPoint> points;
  int order = 0;
  EssentialPolicy essential_policy = EssentialPolicy::kCloseAtAlphaMax;
  double alpha_max = 0.0;  // closing value applied to essential classes
  int essential_count = 0;

  double total_weight() const;
};

// Vietoris-Rips (clique) filtration persistence for homology orders
// 0 .. max_order-1. A simplex enters at the maximum weight of its edges;
// vertices enter at alpha_min. Order 0 is computed with union-find over the
// sorted edges, higher orders with boundary-matrix column reduction over Z/2.
// Needs simplices up to dimension max_order, hence max_order <= D - 1.
std::vector<PersistenceDiagram> rips_persistence(
    const FilteredGraph& g, int max_order,
    DiagramWeight weight_fn = DiagramWeight::kConstantOne);

// Exact bottleneck distance between two diagrams of the same order, by
// binary search over candidate values with a perfect-matching feasibility
// test (diagonal projections included). Point weights are ignored; this is a
// distance between the underlying multisets. Intended for test-scale inputs:
// fails above kBottleneckMaxPoints combined points.
inline constexpr std::size_t kBottleneckMaxPoints = 256;
double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b);

}  // namespace tada
