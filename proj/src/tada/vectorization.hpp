#pragma once

#include <Eigen/Core>
#include <vector>

#include "tada/quantization.hpp"

namespace tada {

// Fixed set of centers with per-center bandwidths. Applying it to a diagram
// yields one coordinate per center: the total mass seen through a Gaussian
// kernel of that bandwidth.
struct Vectorizer {
  std::vector<std::pair<double, double>> centers;
  std::vector<double> bandwidths;
  int homology_order = 0;

  int dimension() const { return static_cast<int>(centers.size()); }
};

// Bandwidths are half the distance to the nearest other center. A single
// center has no neighbor, so it falls back to the support radius of the
// measures the centers were fit on. Duplicate centers are an error (the
// bandwidth would vanish).
Vectorizer build_vectorizer(const CentroidSet& centroids, double support_radius = 4.0);

// v_j = sum over points of weight * exp(-(||p - c_j|| / sigma_j)^2).
// Linear in the diagram measure; each coordinate is bounded by the total
// mass. The empty diagram maps to the zero vector.
Eigen::VectorXd vectorize(const Vectorizer& vec, const PersistenceDiagram& diagram);

}  // namespace tada
