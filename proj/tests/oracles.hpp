#pragma once

// Independent reference implementations used only by the tests. They avoid
// the algorithms the library uses (union-find, Lloyd iterations) so that a
// shared bug cannot cancel out.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "tada/quantization.hpp"

namespace oracles {

// Connected-component count of the graph keeping edges with weight <= alpha,
// by plain breadth-first search.
inline int components_at(const Eigen::MatrixXd& w, double alpha) {
  const int d = static_cast<int>(w.rows());
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  int count = 0;
  for (int s = 0; s < d; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    ++count;
    std::queue<int> q;
    q.push(s);
    seen[static_cast<std::size_t>(s)] = true;
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int u = 0; u < d; ++u) {
        if (u == v || seen[static_cast<std::size_t>(u)] || w(v, u) > alpha) continue;
        seen[static_cast<std::size_t>(u)] = true;
        q.push(u);
      }
    }
  }
  return count;
}

// Order-0 persistence of the complete weighted graph: all components are born
// at alpha_min; every drop in the component count when the threshold passes a
// distinct edge weight emits that many deaths; one essential component closes
// at alpha_max. Zero-persistence points are dropped, output sorted by death.
inline std::vector<std::pair<double, double>> h0_diagram(const Eigen::MatrixXd& w,
                                                         double alpha_min, double alpha_max) {
  const int d = static_cast<int>(w.rows());
  std::vector<double> levels;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) levels.push_back(w(i, j));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<std::pair<double, double>> points;
  int prev = d;
  for (double a : levels) {
    const int now = components_at(w, a);
    for (int m = 0; m < prev - now; ++m) points.emplace_back(alpha_min, a);
    prev = now;
  }
  points.emplace_back(alpha_min, alpha_max);
  points.erase(std::remove_if(points.begin(), points.end(),
                              [](const auto& p) { return p.second <= p.first; }),
               points.end());
  std::sort(points.begin(), points.end());
  return points;
}

// Globally optimal weighted k-means cost by enumerating every assignment of
// the atoms to k labeled cells. Feasible only for tiny instances.
inline double kmeans_optimum(const std::vector<tada::WeightedAtom>& atoms, int k) {
  const std::size_t n = atoms.size();
  std::vector<int> assign(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> mass(static_cast<std::size_t>(k), 0.0);
    std::vector<double> sx(static_cast<std::size_t>(k), 0.0);
    std::vector<double> sy(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(assign[i]);
      mass[c] += atoms[i].mass;
      sx[c] += atoms[i].mass * atoms[i].x;
      sy[c] += atoms[i].mass * atoms[i].y;
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(assign[i]);
      if (mass[c] <= 0.0) continue;
      const double dx = atoms[i].x - sx[c] / mass[c];
      const double dy = atoms[i].y - sy[c] / mass[c];
      cost += atoms[i].mass * (dx * dx + dy * dy);
    }
    best = std::min(best, cost);

    std::size_t pos = 0;
    while (pos < n && assign[pos] == k - 1) assign[pos++] = 0;
    if (pos == n) break;
    ++assign[pos];
  }
  return best;
}

}  // namespace oracles
