#include "tada/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tada/parallel.hpp"
#include "tada/rng.hpp"

namespace tada {

namespace {

double sq_dist(const WeightedAtom& a, const std::pair<double, double>& c) {
  const double dx = a.x - c.first;
  const double dy = a.y - c.second;
  return dx * dx + dy * dy;
}

std::size_t nearest_center(const WeightedAtom& a,
                           const std::vector<std::pair<double, double>>& centers) {
  std::size_t best = 0;
  double best_d = sq_dist(a, centers[0]);
  for (std::size_t j = 1; j < centers.size(); ++j) {
    const double dj = sq_dist(a, centers[j]);
    if (dj < best_d) {
      best_d = dj;
      best = j;
    }
  }
  return best;
}

double cost_against(const std::vector<WeightedAtom>& atoms,
                    const std::vector<std::pair<double, double>>& centers) {
  double cost = 0.0;
  for (const auto& a : atoms) {
    double best = sq_dist(a, centers[0]);
    for (std::size_t j = 1; j < centers.size(); ++j) best = std::min(best, sq_dist(a, centers[j]));
    cost += a.mass * best;
  }
  return cost;
}

// Mass-weighted draw from the atoms not marked in `used`. Linear walk over a
// running total keeps the draw identical across platforms.
std::size_t draw_atom(const std::vector<WeightedAtom>& atoms, const std::vector<bool>& used,
                      std::mt19937_64& rng) {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!used[i]) total += atoms[i].mass;
  }
  require(total > 0.0, ErrorCode::kDegenerate, "no support atoms left to draw");
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (used[i]) continue;
    acc += atoms[i].mass;
    last = i;
    if (u < acc) return i;
  }
  return last;  // u == total after rounding
}

std::vector<std::pair<double, double>> init_centers(const std::vector<WeightedAtom>& atoms, int k,
                                                    std::mt19937_64& rng) {
  std::vector<bool> used(atoms.size(), false);
  std::vector<std::pair<double, double>> centers;
  centers.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const std::size_t i = draw_atom(atoms, used, rng);
    used[i] = true;
    centers.emplace_back(atoms[i].x, atoms[i].y);
  }
  return centers;
}

// Exact duplicate centers would collapse the vectorization bandwidths; they
// are re-sampled from unused support atoms.
int fix_duplicate_centers(std::vector<std::pair<double, double>>& centers,
                          const std::vector<WeightedAtom>& atoms, std::mt19937_64& rng) {
  int fixes = 0;
  for (std::size_t j = 1; j < centers.size(); ++j) {
    bool dup = false;
    do {
      dup = false;
      for (std::size_t i = 0; i < j; ++i) {
        if (centers[i] == centers[j]) {
          dup = true;
          break;
        }
      }
      if (dup) {
        std::vector<bool> used(atoms.size(), false);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
          for (const auto& c : centers) {
            if (atoms[i].x == c.first && atoms[i].y == c.second) {
              used[i] = true;
              break;
            }
          }
        }
        const std::size_t pick = draw_atom(atoms, used, rng);
        centers[j] = {atoms[pick].x, atoms[pick].y};
        ++fixes;
      }
    } while (dup);
  }
  return fixes;
}

void validate_common(const MeasureSequence& seq, const QuantizeConfig& cfg) {
  require(seq.size() >= 1, ErrorCode::kTooFewSamples, "measure sequence is empty");
  require(cfg.k >= 1, ErrorCode::kInvalidArgument, "k must be at least 1");
  require(cfg.n_start >= 1, ErrorCode::kInvalidArgument, "n_start must be at least 1");
  require(cfg.r_projection > 0.0, ErrorCode::kInvalidArgument, "projection radius must be positive");
}

int order_of(std::span<const PersistenceDiagram> measures) {
  return measures.empty() ? 0 : measures.front().order;
}

}  // namespace

std::vector<WeightedAtom> mean_measure(std::span<const PersistenceDiagram> measures) {
  const double n = static_cast<double>(measures.size());
  std::vector<WeightedAtom> atoms;
  for (const auto& diagram : measures) {
    for (const auto& p : diagram.points) atoms.push_back({p.birth, p.death, p.weight / n});
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const WeightedAtom& a, const WeightedAtom& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  std::vector<WeightedAtom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().x == a.x && merged.back().y == a.y) {
      merged.back().mass += a.mass;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

int default_batch_iterations(std::int64_t n_measures) {
  const double n = static_cast<double>(std::max<std::int64_t>(n_measures, 2));
  return std::max(1, 2 * static_cast<int>(std::ceil(std::log(n))));
}

std::int64_t default_minibatch_q(std::int64_t n_measures) {
  return std::max<std::int64_t>(1, (n_measures + 39) / 40);
}

CentroidSet atol_batch(const MeasureSequence& seq, const QuantizeConfig& cfg,
                       std::vector<BatchTrace>* traces) {
  validate_common(seq, cfg);
  const std::vector<WeightedAtom> atoms = mean_measure(seq.measures);
  require(static_cast<std::size_t>(cfg.k) <= atoms.size(), ErrorCode::kInvalidArgument,
          "k = " + std::to_string(cfg.k) + " exceeds the " + std::to_string(atoms.size()) +
              " distinct support atoms of the mean measure");
  const int t_max = cfg.t_max > 0 ? cfg.t_max : default_batch_iterations(seq.size());

  struct RestartResult {
    std::vector<std::pair<double, double>> centers;
    double cost = std::numeric_limits<double>::infinity();
    int duplicate_fixes = 0;
  };
  std::vector<RestartResult> results(static_cast<std::size_t>(cfg.n_start));
  if (traces) {
    traces->assign(static_cast<std::size_t>(cfg.n_start), {});
  }

  parallel_for(cfg.n_start, [&](std::int64_t r) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    auto centers = init_centers(atoms, cfg.k, rng);
    BatchTrace trace;
    std::vector<double> mass(centers.size());
    std::vector<double> sum_x(centers.size());
    std::vector<double> sum_y(centers.size());

    for (int t = 0; t < t_max; ++t) {
      std::fill(mass.begin(), mass.end(), 0.0);
      std::fill(sum_x.begin(), sum_x.end(), 0.0);
      std::fill(sum_y.begin(), sum_y.end(), 0.0);
      for (const auto& a : atoms) {
        const std::size_t j = nearest_center(a, centers);
        mass[j] += a.mass;
        sum_x[j] += a.mass * a.x;
        sum_y[j] += a.mass * a.y;
      }
      bool resampled = false;
      for (std::size_t j = 0; j < centers.size(); ++j) {
        if (mass[j] > 0.0) {
          centers[j] = {sum_x[j] / mass[j], sum_y[j] / mass[j]};
        } else {
          std::vector<bool> used(atoms.size(), false);
          const std::size_t pick = draw_atom(atoms, used, rng);
          centers[j] = {atoms[pick].x, atoms[pick].y};
          resampled = true;
        }
      }
      trace.costs.push_back(cost_against(atoms, centers));
      trace.resampled.push_back(resampled);
    }

    const int fixes = fix_duplicate_centers(centers, atoms, rng);
    results[static_cast<std::size_t>(r)] = {centers, cost_against(atoms, centers), fixes};
    if (traces) (*traces)[static_cast<std::size_t>(r)] = std::move(trace);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].cost < results[best].cost) best = r;
  }
  if (results[best].duplicate_fixes > 0) {
    warn("quantization re-sampled " + std::to_string(results[best].duplicate_fixes) +
         " duplicate center(s)");
  }
  return {results[best].centers, order_of(seq.measures), cfg.n_start, results[best].cost};
}

CentroidSet atol_minibatch(const MeasureSequence& seq, const QuantizeConfig& cfg) {
  validate_common(seq, cfg);
  const std::int64_t n = seq.size();
  const std::int64_t q = cfg.minibatch_q > 0 ? cfg.minibatch_q : default_minibatch_q(n);
  const int group = cfg.spacing == MinibatchSpacing::kPaper ? 4 : 2;
  const std::int64_t update_offset = cfg.spacing == MinibatchSpacing::kPaper ? 2 * q : q;
  require(n >= group * q, ErrorCode::kTooFewSamples,
          "minibatch quantization needs at least " + std::to_string(group * q) +
              " measures (q = " + std::to_string(q) + "), got " + std::to_string(n));
  const std::int64_t t_count = n / (group * q);

  const std::vector<WeightedAtom> atoms = mean_measure(seq.measures);
  require(static_cast<std::size_t>(cfg.k) <= atoms.size(), ErrorCode::kInvalidArgument,
          "k = " + std::to_string(cfg.k) + " exceeds the " + std::to_string(atoms.size()) +
              " distinct support atoms of the mean measure");

  struct RestartResult {
    std::vector<std::pair<double, double>> centers;
    double cost = std::numeric_limits<double>::infinity();
    int duplicate_fixes = 0;
  };
  std::vector<RestartResult> results(static_cast<std::size_t>(cfg.n_start));

  parallel_for(cfg.n_start, [&](std::int64_t r) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    auto centers = init_centers(atoms, cfg.k, rng);
    std::vector<double> mass(centers.size());
    std::vector<double> num_x(centers.size());
    std::vector<double> num_y(centers.size());

    for (std::int64_t t = 0; t < t_count; ++t) {
      const std::int64_t base = t * group * q;
      std::fill(mass.begin(), mass.end(), 0.0);
      std::fill(num_x.begin(), num_x.end(), 0.0);
      std::fill(num_y.begin(), num_y.end(), 0.0);
      for (std::int64_t i = base; i < base + q; ++i) {
        for (const auto& p : seq.measures[static_cast<std::size_t>(i)].points) {
          const WeightedAtom a{p.birth, p.death, p.weight};
          mass[nearest_center(a, centers)] += p.weight;
        }
      }
      for (std::int64_t i = base + update_offset; i < base + update_offset + q; ++i) {
        for (const auto& p : seq.measures[static_cast<std::size_t>(i)].points) {
          const WeightedAtom a{p.birth, p.death, p.weight};
          const std::size_t j = nearest_center(a, centers);
          num_x[j] += p.weight * p.birth;
          num_y[j] += p.weight * p.death;
        }
      }
      for (std::size_t j = 0; j < centers.size(); ++j) {
        if (mass[j] == 0.0) continue;  // carry the center over
        double cx = num_x[j] / mass[j];
        double cy = num_y[j] / mass[j];
        const double norm = std::hypot(cx, cy);
        if (norm > cfg.r_projection) {
          cx *= cfg.r_projection / norm;
          cy *= cfg.r_projection / norm;
        }
        centers[j] = {cx, cy};
      }
    }

    const int fixes = fix_duplicate_centers(centers, atoms, rng);
    results[static_cast<std::size_t>(r)] = {centers, cost_against(atoms, centers), fixes};
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].cost < results[best].cost) best = r;
  }
  if (results[best].duplicate_fixes > 0) {
    warn("quantization re-sampled " + std::to_string(results[best].duplicate_fixes) +
         " duplicate center(s)");
  }
  return {results[best].centers, order_of(seq.measures), cfg.n_start, results[best].cost};
}

double quantization_cost(const MeasureSequence& seq, const CentroidSet& centroids) {
  require(!centroids.centers.empty(), ErrorCode::kInvalidArgument, "centroid set is empty");
  require(seq.size() >= 1, ErrorCode::kTooFewSamples, "measure sequence is empty");
  return cost_against(mean_measure(seq.measures), centroids.centers);
}

}  // namespace tada
