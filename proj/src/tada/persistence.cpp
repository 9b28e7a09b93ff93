#include "tada/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace tada {

void FilteredGraph::validate() const {
  const std::int64_t d = weights.rows();
  require(d >= 2, ErrorCode::kInvalidArgument, "filtered graph needs at least 2 vertices");
  require(weights.cols() == d, ErrorCode::kDimensionMismatch, "weight matrix must be square");
  require(weights.allFinite(), ErrorCode::kNonFinite, "weight matrix contains non-finite values");
  require(alpha_min <= alpha_max, ErrorCode::kInvalidArgument, "alpha_min exceeds alpha_max");
  for (std::int64_t i = 0; i < d; ++i) {
    require(weights(i, i) == 0.0, ErrorCode::kInvalidArgument, "weight matrix diagonal must be 0");
    for (std::int64_t j = i + 1; j < d; ++j) {
      require(weights(i, j) == weights(j, i), ErrorCode::kInvalidArgument,
              "weight matrix must be symmetric");
      require(weights(i, j) >= alpha_min && weights(i, j) <= alpha_max,
              ErrorCode::kInvalidArgument, "edge weight outside [alpha_min, alpha_max]");
    }
  }
}

double PersistenceDiagram::total_weight() const {
  double s = 0.0;
  for (const auto& p : points) s += p.weight;
  return s;
}

namespace {

class BinomialTable {
 public:
  BinomialTable(int n_max, int k_max) : k_max_(k_max + 1) {
    table_.assign(static_cast<std::size_t>((n_max + 1) * k_max_), 0);
    for (int n = 0; n <= n_max; ++n) {
      at(n, 0) = 1;
      for (int k = 1; k <= std::min(n, k_max); ++k) {
        at(n, k) = at(n - 1, k - 1) + (n - 1 >= k ? at(n - 1, k) : 0);
        require(at(n, k) >= 0 && at(n, k) < std::numeric_limits<std::int32_t>::max(),
                ErrorCode::kSizeLimit, "simplex count exceeds the supported range");
      }
    }
  }

  std::int64_t operator()(int n, int k) const {
    if (k < 0 || k > n) return 0;
    return table_[static_cast<std::size_t>(n * k_max_ + k)];
  }

 private:
  std::int64_t& at(int n, int k) { return table_[static_cast<std::size_t>(n * k_max_ + k)]; }
  std::vector<std::int64_t> table_;
  int k_max_;
};

// Simplices of one dimension, enumerated in colex order and then sorted by
// (filtration value, colex index). The colex index doubles as a perfect hash
// for facet lookups.
struct DimSimplices {
  int dim = 0;
  std::int64_t count = 0;
  std::vector<std::int16_t> verts;        // (dim+1) per simplex, colex order, ascending
  std::vector<double> value;              // by colex index
  std::vector<std::int32_t> sorted;       // sorted position -> colex index
  std::vector<std::int32_t> position_of;  // colex index -> sorted position

  double value_at_sorted(std::int32_t s) const { return value[static_cast<std::size_t>(sorted[static_cast<std::size_t>(s)])]; }
  const std::int16_t* verts_at_sorted(std::int32_t s) const {
    return verts.data() + static_cast<std::size_t>(sorted[static_cast<std::size_t>(s)]) * (dim + 1);
  }
};

DimSimplices enumerate_dim(const Eigen::MatrixXd& w, int d, int dim, const BinomialTable& binom) {
  DimSimplices out;
  out.dim = dim;
  out.count = binom(d, dim + 1);
  require(out.count > 0 && out.count < std::numeric_limits<std::int32_t>::max(),
          ErrorCode::kSizeLimit, "simplex count exceeds the supported range");
  out.verts.resize(static_cast<std::size_t>(out.count) * (dim + 1));
  out.value.resize(static_cast<std::size_t>(out.count));

  std::vector<int> combo(static_cast<std::size_t>(dim + 1));
  std::vector<double> running_max(static_cast<std::size_t>(dim + 2), 0.0);
  std::int64_t idx = 0;

  // Nested descent choosing vertices from largest to smallest yields colex
  // order; the running max of edge weights is carried down the recursion.
  auto recurse = [&](auto&& self, int slot, int below) -> void {
    // slot counts down from dim to 0; vertices chosen so far live in
    // combo[slot+1 .. dim] and are all > any candidate for this slot.
    for (int v = slot; v <= below; ++v) {
      combo[static_cast<std::size_t>(slot)] = v;
      double m = running_max[static_cast<std::size_t>(slot + 1)];
      for (int k = slot + 1; k <= dim; ++k) {
        m = std::max(m, w(v, combo[static_cast<std::size_t>(k)]));
      }
      running_max[static_cast<std::size_t>(slot)] = m;
      if (slot == 0) {
        for (int k = 0; k <= dim; ++k) {
          out.verts[static_cast<std::size_t>(idx) * (dim + 1) + k] =
              static_cast<std::int16_t>(combo[static_cast<std::size_t>(k)]);
        }
        out.value[static_cast<std::size_t>(idx)] = m;
        ++idx;
      } else {
        self(self, slot - 1, v - 1);
      }
    }
  };
  recurse(recurse, dim, d - 1);

  out.sorted.resize(static_cast<std::size_t>(out.count));
  std::iota(out.sorted.begin(), out.sorted.end(), 0);
  std::stable_sort(out.sorted.begin(), out.sorted.end(), [&](std::int32_t a, std::int32_t b) {
    return out.value[static_cast<std::size_t>(a)] < out.value[static_cast<std::size_t>(b)];
  });
  out.position_of.resize(static_cast<std::size_t>(out.count));
  for (std::int64_t s = 0; s < out.count; ++s) {
    out.position_of[static_cast<std::size_t>(out.sorted[static_cast<std::size_t>(s)])] =
        static_cast<std::int32_t>(s);
  }
  return out;
}

std::int64_t colex_rank(const std::int16_t* v, int n_verts, const BinomialTable& binom) {
  std::int64_t r = 0;
  for (int i = 0; i < n_verts; ++i) r += binom(v[i], i + 1);
  return r;
}

// Symmetric difference of two sorted index vectors (Z/2 column addition).
void xor_into(std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
  std::vector<std::int32_t> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else if (b[j] < a[i]) {
      out.push_back(b[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  a = std::move(out);
}

struct UnionFind {
  std::vector<std::int32_t> parent;
  explicit UnionFind(std::int32_t n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::int32_t find(std::int32_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

void finalize(PersistenceDiagram& diagram, DiagramWeight weight_fn) {
  for (auto& p : diagram.points) {
    p.weight = weight_fn == DiagramWeight::kConstantOne ? 1.0 : p.death - p.birth;
  }
  std::sort(diagram.points.begin(), diagram.points.end(),
            [](const DiagramPoint& a, const DiagramPoint& b) {
              if (a.birth != b.birth) return a.birth < b.birth;
              if (a.death != b.death) return a.death < b.death;
              return a.weight < b.weight;
            });
}

}  // namespace

std::vector<PersistenceDiagram> rips_persistence(const FilteredGraph& g, int max_order,
                                                 DiagramWeight weight_fn) {
  g.validate();
  const int d = g.n_vertices();
  require(max_order >= 1, ErrorCode::kInvalidArgument, "max_order must be at least 1");
  require(max_order <= d - 1, ErrorCode::kOrderTooLarge,
          "max_order " + std::to_string(max_order) + " needs simplices of dimension " +
              std::to_string(max_order) + ", which requires at least " +
              std::to_string(max_order + 1) + " vertices");

  const BinomialTable binom(d, max_order + 1);
  std::vector<PersistenceDiagram> diagrams(static_cast<std::size_t>(max_order));
  for (int ord = 0; ord < max_order; ++ord) {
    diagrams[static_cast<std::size_t>(ord)].order = ord;
    diagrams[static_cast<std::size_t>(ord)].alpha_max = g.alpha_max;
  }

  // Dimension 1: union-find over the sorted edges gives order 0 directly. An
  // edge that merges two components is negative, the rest create loops.
  DimSimplices edges = enumerate_dim(g.weights, d, 1, binom);
  std::vector<bool> positive_prev(static_cast<std::size_t>(edges.count), false);
  {
    UnionFind uf(static_cast<std::int32_t>(d));
    auto& h0 = diagrams[0];
    for (std::int32_t s = 0; s < edges.count; ++s) {
      const std::int16_t* v = edges.verts_at_sorted(s);
      const double val = edges.value_at_sorted(s);
      if (uf.unite(v[0], v[1])) {
        if (g.alpha_min < val) h0.points.push_back({g.alpha_min, val, 1.0});
      } else {
        positive_prev[static_cast<std::size_t>(s)] = true;
      }
    }
    // A complete graph always ends connected: one essential component.
    if (g.alpha_min < g.alpha_max) {
      h0.points.push_back({g.alpha_min, g.alpha_max, 1.0});
      h0.essential_count = 1;
    }
  }

  // Dimensions 2..max_order: column reduction of the dim-k boundary matrix
  // over the dim-(k-1) rows. Pivots of reduced columns are persistence pairs;
  // columns that vanish are positive simplices of dimension k.
  DimSimplices prev = std::move(edges);
  for (int k = 2; k <= max_order; ++k) {
    DimSimplices cur = enumerate_dim(g.weights, d, k, binom);
    std::vector<std::int32_t> claimed(static_cast<std::size_t>(prev.count), -1);
    std::vector<std::vector<std::int32_t>> reduced(static_cast<std::size_t>(cur.count));
    std::vector<bool> positive_cur(static_cast<std::size_t>(cur.count), false);
    std::vector<bool> paired_row(static_cast<std::size_t>(prev.count), false);
    auto& target = diagrams[static_cast<std::size_t>(k - 1)];

    std::vector<std::int16_t> facet(static_cast<std::size_t>(k));
    for (std::int32_t j = 0; j < cur.count; ++j) {
      const std::int16_t* v = cur.verts_at_sorted(j);
      std::vector<std::int32_t> col;
      col.reserve(static_cast<std::size_t>(k + 1));
      for (int drop = 0; drop <= k; ++drop) {
        int n = 0;
        for (int i = 0; i <= k; ++i) {
          if (i != drop) facet[static_cast<std::size_t>(n++)] = v[i];
        }
        col.push_back(prev.position_of[static_cast<std::size_t>(colex_rank(facet.data(), k, binom))]);
      }
      std::sort(col.begin(), col.end());

      for (;;) {
        if (col.empty()) {
          positive_cur[static_cast<std::size_t>(j)] = true;
          break;
        }
        const std::int32_t piv = col.back();
        const std::int32_t owner = claimed[static_cast<std::size_t>(piv)];
        if (owner < 0) {
          claimed[static_cast<std::size_t>(piv)] = j;
          paired_row[static_cast<std::size_t>(piv)] = true;
          const double birth = prev.value_at_sorted(piv);
          const double death = cur.value_at_sorted(j);
          if (birth < death) target.points.push_back({birth, death, 1.0});
          reduced[static_cast<std::size_t>(j)] = std::move(col);
          break;
        }
        xor_into(col, reduced[static_cast<std::size_t>(owner)]);
      }
    }

    // Unpaired positive (k-1)-simplices are essential classes of order k-1.
    // A complete graph fills every cycle of order >= 1, so this is empty in
    // practice; the closing rule is applied uniformly regardless.
    for (std::int32_t r = 0; r < prev.count; ++r) {
      if (positive_prev[static_cast<std::size_t>(r)] && !paired_row[static_cast<std::size_t>(r)]) {
        const double birth = prev.value_at_sorted(r);
        if (birth < g.alpha_max) {
          target.points.push_back({birth, g.alpha_max, 1.0});
          ++target.essential_count;
        }
      }
    }

    positive_prev = std::move(positive_cur);
    prev = std::move(cur);
  }

  for (auto& diagram : diagrams) finalize(diagram, weight_fn);
  return diagrams;
}

namespace {

double linf(const DiagramPoint& a, const DiagramPoint& b) {
  return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diag_gap(const DiagramPoint& p) { return (p.death - p.birth) / 2.0; }

// Kuhn's augmenting-path matching on the standard bipartite construction:
// each side holds the real points of one diagram plus one diagonal slot per
// point of the other diagram. Diagonal slots pair with each other for free.
class BottleneckFeasibility {
 public:
  BottleneckFeasibility(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b)
      : a_(a), b_(b), n_(a.size()), m_(b.size()), size_(n_ + m_) {}

  bool feasible(double t) {
    t_ = t;
    match_left_.assign(size_, -1);
    match_right_.assign(size_, -1);
    for (std::size_t u = 0; u < size_; ++u) {
      visited_.assign(size_, false);
      if (!augment(u)) return false;
    }
    return true;
  }

 private:
  bool edge(std::size_t u, std::size_t v) const {
    const bool u_real = u < n_;
    const bool v_real = v < m_;
    if (u_real && v_real) return linf(a_[u], b_[v]) <= t_;
    if (u_real) return v - m_ == u && diag_gap(a_[u]) <= t_;
    if (v_real) return u - n_ == v && diag_gap(b_[v]) <= t_;
    return true;  // diagonal slot to diagonal slot
  }

  bool augment(std::size_t u) {
    for (std::size_t v = 0; v < size_; ++v) {
      if (visited_[v] || !edge(u, v)) continue;
      visited_[v] = true;
      if (match_right_[v] < 0 || augment(static_cast<std::size_t>(match_right_[v]))) {
        match_right_[v] = static_cast<std::ptrdiff_t>(u);
        match_left_[u] = static_cast<std::ptrdiff_t>(v);
        return true;
      }
    }
    return false;
  }

  const std::vector<DiagramPoint>& a_;
  const std::vector<DiagramPoint>& b_;
  std::size_t n_, m_, size_;
  double t_ = 0.0;
  std::vector<std::ptrdiff_t> match_left_, match_right_;
  std::vector<bool> visited_;
};

}  // namespace

double bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  require(a.order == b.order, ErrorCode::kInvalidArgument,
          "bottleneck distance needs diagrams of the same order");
  const std::size_t n = a.points.size();
  const std::size_t m = b.points.size();
  require(n + m <= kBottleneckMaxPoints, ErrorCode::kSizeLimit,
          "bottleneck distance supports at most " + std::to_string(kBottleneckMaxPoints) +
              " combined points, got " + std::to_string(n + m));
  if (n == 0 && m == 0) return 0.0;

  std::vector<double> candidates;
  candidates.reserve(n * m + n + m + 1);
  candidates.push_back(0.0);
  for (const auto& p : a.points) candidates.push_back(diag_gap(p));
  for (const auto& q : b.points) candidates.push_back(diag_gap(q));
  for (const auto& p : a.points) {
    for (const auto& q : b.points) candidates.push_back(linf(p, q));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  BottleneckFeasibility feas(a.points, b.points);
  std::size_t lo = 0, hi = candidates.size() - 1;
  // The largest candidate always admits a perfect matching.
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (feas.feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace tada
