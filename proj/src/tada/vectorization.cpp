#include "tada/vectorization.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace tada {

Vectorizer build_vectorizer(const CentroidSet& centroids, double support_radius) {
  const auto& c = centroids.centers;
  require(!c.empty(), ErrorCode::kInvalidArgument, "centroid set is empty");
  require(support_radius > 0.0, ErrorCode::kInvalidArgument, "support radius must be positive");

  Vectorizer out;
  out.centers = c;
  out.homology_order = centroids.homology_order;
  out.bandwidths.resize(c.size());

  if (c.size() == 1) {
    out.bandwidths[0] = support_radius;
    return out;
  }
  for (std::size_t j = 0; j < c.size(); ++j) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < c.size(); ++l) {
      if (l == j) continue;
      const double dx = c[l].first - c[j].first;
      const double dy = c[l].second - c[j].second;
      nearest = std::min(nearest, std::sqrt(dx * dx + dy * dy));
    }
    require(nearest > 0.0, ErrorCode::kDegenerate,
            "duplicate centers at index " + std::to_string(j) + " give a zero bandwidth");
    out.bandwidths[j] = nearest / 2.0;
  }
  return out;
}

Eigen::VectorXd vectorize(const Vectorizer& vec, const PersistenceDiagram& diagram) {
  require(vec.dimension() > 0, ErrorCode::kInvalidArgument, "vectorizer has no centers");
  require(vec.centers.size() == vec.bandwidths.size(), ErrorCode::kDimensionMismatch,
          "vectorizer centers and bandwidths differ in length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(vec.dimension());
  for (int j = 0; j < vec.dimension(); ++j) {
    const double cx = vec.centers[static_cast<std::size_t>(j)].first;
    const double cy = vec.centers[static_cast<std::size_t>(j)].second;
    const double sigma = vec.bandwidths[static_cast<std::size_t>(j)];
    double acc = 0.0;
    for (const auto& p : diagram.points) {
      const double dx = p.birth - cx;
      const double dy = p.death - cy;
      const double u = (dx * dx + dy * dy) / (sigma * sigma);
      acc += p.weight * std::exp(-u);
    }
    out(j) = acc;
  }
  return out;
}

}  // namespace tada
