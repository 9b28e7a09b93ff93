#include "tada/persistence.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tada/rng.hpp"

using namespace tada;

namespace {

FilteredGraph random_graph(int d, std::mt19937_64& rng, double lo = 0.2, double hi = 1.8) {
  FilteredGraph g;
  g.weights = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double w = lo + (hi - lo) * uniform01(rng);
      g.weights(i, j) = w;
      g.weights(j, i) = w;
    }
  }
  g.alpha_min = 0.0;
  g.alpha_max = 2.0;
  return g;
}

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

PersistenceDiagram diagram_of(std::vector<DiagramPoint> pts, int order = 0) {
  PersistenceDiagram d;
  d.points = std::move(pts);
  d.order = order;
  d.alpha_max = 2.0;
  return d;
}

}  // namespace

TEST_CASE("triangle with edges 1, 2, 3") {
  FilteredGraph g;
  g.weights = Eigen::MatrixXd::Zero(3, 3);
  g.weights(0, 1) = g.weights(1, 0) = 1.0;
  g.weights(0, 2) = g.weights(2, 0) = 2.0;
  g.weights(1, 2) = g.weights(2, 1) = 3.0;
  g.alpha_min = 0.0;
  g.alpha_max = 3.0;

  const auto diagrams = rips_persistence(g, 2);
  REQUIRE(diagrams.size() == 2);

  const auto& h0 = diagrams[0];
  REQUIRE(h0.points.size() == 3);
  CHECK(h0.points[0].birth == 0.0);
  CHECK(h0.points[0].death == 1.0);
  CHECK(h0.points[1].birth == 0.0);
  CHECK(h0.points[1].death == 2.0);
  CHECK(h0.points[2].birth == 0.0);
  CHECK(h0.points[2].death == 3.0);
  CHECK(h0.essential_count == 1);
  CHECK(h0.order == 0);

  // the 1-cycle appears and is filled at the same value
  CHECK(diagrams[1].points.empty());
}

TEST_CASE("4-cycle with heavy diagonals") {
  FilteredGraph g;
  g.weights = Eigen::MatrixXd::Zero(4, 4);
  const auto set = [&](int i, int j, double w) {
    g.weights(i, j) = w;
    g.weights(j, i) = w;
  };
  set(0, 1, 1.0);
  set(1, 2, 1.0);
  set(2, 3, 1.0);
  set(0, 3, 1.0);
  set(0, 2, 2.0);
  set(1, 3, 2.0);
  g.alpha_min = 0.0;
  g.alpha_max = 2.0;

  const auto diagrams = rips_persistence(g, 2);
  const auto& h1 = diagrams[1];
  REQUIRE(h1.points.size() == 1);
  CHECK(h1.points[0].birth == 1.0);
  CHECK(h1.points[0].death == 2.0);
  CHECK(h1.order == 1);
}

TEST_CASE("equal weights merge everything at once") {
  for (int d : {3, 5, 8}) {
    FilteredGraph g;
    g.weights = Eigen::MatrixXd::Constant(d, d, 0.7);
    g.weights.diagonal().setZero();
    g.alpha_min = 0.0;
    g.alpha_max = 2.0;
    const auto diagrams = rips_persistence(g, 2);
    const auto& h0 = diagrams[0];
    REQUIRE(static_cast<int>(h0.points.size()) == d);
    for (int i = 0; i + 1 < d; ++i) {
      CHECK(h0.points[static_cast<std::size_t>(i)].birth == 0.0);
      CHECK(h0.points[static_cast<std::size_t>(i)].death == 0.7);
    }
    CHECK(h0.points.back().death == 2.0);
    CHECK(diagrams[1].points.empty());
  }
}

TEST_CASE("zero-persistence points are dropped") {
  FilteredGraph g;
  g.weights = Eigen::MatrixXd::Zero(4, 4);
  g.alpha_min = 0.0;
  g.alpha_max = 2.0;
  const auto diagrams = rips_persistence(g, 1);
  // everything merges at 0 = alpha_min; only the essential component remains
  REQUIRE(diagrams[0].points.size() == 1);
  CHECK(diagrams[0].points[0].birth == 0.0);
  CHECK(diagrams[0].points[0].death == 2.0);
}

TEST_CASE("order-0 agreement with the connectivity oracle") {
  std::mt19937_64 rng(20240803);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 3 + static_cast<int>(rng() % 6);
    const auto g = random_graph(d, rng);
    const auto diagrams = rips_persistence(g, 1);
    const auto expected = oracles::h0_diagram(g.weights, g.alpha_min, g.alpha_max);
    REQUIRE(diagrams[0].points.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(diagrams[0].points[i].birth == expected[i].first);
      CHECK(diagrams[0].points[i].death == expected[i].second);
    }
  }
}

TEST_CASE("diagram invariants on random graphs") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 4 + static_cast<int>(rng() % 5);
    const auto g = random_graph(d, rng);
    const int max_order = std::min(3, d - 1);
    const auto diagrams = rips_persistence(g, max_order);
    REQUIRE(static_cast<int>(diagrams.size()) == max_order);
    for (int ord = 0; ord < max_order; ++ord) {
      const auto& dg = diagrams[static_cast<std::size_t>(ord)];
      CHECK(dg.order == ord);
      CHECK(static_cast<std::int64_t>(dg.points.size()) <= binom(d, ord + 1));
      for (std::size_t i = 0; i < dg.points.size(); ++i) {
        const auto& p = dg.points[i];
        CHECK(p.birth >= g.alpha_min);
        CHECK(p.death <= g.alpha_max);
        CHECK(p.birth < p.death);
        if (i > 0) {
          const auto& prev = dg.points[i - 1];
          CHECK((prev.birth < p.birth || (prev.birth == p.birth && prev.death <= p.death)));
        }
      }
    }
  }
}

TEST_CASE("vertex relabeling leaves diagrams unchanged") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 5 + static_cast<int>(rng() % 3);
    const auto g = random_graph(d, rng);

    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    FilteredGraph h = g;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        h.weights(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) =
            g.weights(i, j);
      }
    }

    const auto a = rips_persistence(g, 3);
    const auto b = rips_persistence(h, 3);
    for (std::size_t ord = 0; ord < a.size(); ++ord) {
      REQUIRE(a[ord].points.size() == b[ord].points.size());
      for (std::size_t i = 0; i < a[ord].points.size(); ++i) {
        CHECK(a[ord].points[i].birth == b[ord].points[i].birth);
        CHECK(a[ord].points[i].death == b[ord].points[i].death);
      }
    }
  }
}

TEST_CASE("stability under edge perturbation") {
  std::mt19937_64 rng(555);
  for (double eps : {0.01, 0.1}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int d = 4 + static_cast<int>(rng() % 4);
      const auto g = random_graph(d, rng);
      FilteredGraph h = g;
      double max_abs = 0.0;
      Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          delta(i, j) = 2.0 * uniform01(rng) - 1.0;
          max_abs = std::max(max_abs, std::abs(delta(i, j)));
        }
      }
      for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
          const double w = g.weights(i, j) + delta(i, j) * (eps / max_abs);
          h.weights(i, j) = w;
          h.weights(j, i) = w;
        }
      }
      const auto da = rips_persistence(g, 2);
      const auto db = rips_persistence(h, 2);
      CHECK(bottleneck_distance(da[0], db[0]) <= eps + 1e-9);
      CHECK(bottleneck_distance(da[1], db[1]) <= eps + 1e-9);
    }
  }
}

TEST_CASE("requested order must leave room for simplices") {
  std::mt19937_64 rng(1);
  const auto g = random_graph(4, rng);
  CHECK_NOTHROW(rips_persistence(g, 3));
  CHECK_THROWS_AS(rips_persistence(g, 4), Error);
  CHECK_THROWS_AS(rips_persistence(g, 0), Error);
  try {
    rips_persistence(g, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOrderTooLarge);
  }
}

TEST_CASE("graph validation") {
  FilteredGraph g;
  g.weights = Eigen::MatrixXd::Zero(3, 3);
  g.weights(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(g.validate(), Error);

  std::mt19937_64 rng(2);
  FilteredGraph out_of_range = random_graph(3, rng);
  out_of_range.alpha_max = 1.0;  // weights reach 1.8
  CHECK_THROWS_AS(out_of_range.validate(), Error);
}

TEST_CASE("persistence mass option") {
  std::mt19937_64 rng(3);
  const auto g = random_graph(6, rng);
  const auto constant = rips_persistence(g, 2, DiagramWeight::kConstantOne);
  const auto weighted = rips_persistence(g, 2, DiagramWeight::kPersistence);
  for (std::size_t ord = 0; ord < constant.size(); ++ord) {
    REQUIRE(constant[ord].points.size() == weighted[ord].points.size());
    for (std::size_t i = 0; i < constant[ord].points.size(); ++i) {
      CHECK(constant[ord].points[i].weight == 1.0);
      const auto& p = weighted[ord].points[i];
      CHECK(p.weight == doctest::Approx(p.death - p.birth));
    }
  }
}

TEST_CASE("bottleneck distance hand values") {
  const auto a = diagram_of({{0.0, 1.0, 1.0}});
  const auto b = diagram_of({});
  CHECK(bottleneck_distance(a, a) == doctest::Approx(0.0));
  CHECK(bottleneck_distance(a, b) == doctest::Approx(0.5));
  CHECK(bottleneck_distance(b, a) == doctest::Approx(0.5));

  const auto c = diagram_of({{0.0, 2.0, 1.0}});
  const auto d = diagram_of({{0.3, 2.1, 1.0}});
  CHECK(bottleneck_distance(c, d) == doctest::Approx(0.3));

  const auto empty_pair = bottleneck_distance(diagram_of({}), diagram_of({}));
  CHECK(empty_pair == 0.0);
}

TEST_CASE("bottleneck distance rejects oversized inputs") {
  std::vector<DiagramPoint> many(300, DiagramPoint{0.0, 1.0, 1.0});
  const auto big = diagram_of(many);
  try {
    bottleneck_distance(big, big);
    FAIL("expected a size-limit error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSizeLimit);
  }
}
