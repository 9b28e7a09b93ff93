#include "tada/vectorization.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "tada/rng.hpp"

using namespace tada;

namespace {

CentroidSet centroids(std::vector<std::pair<double, double>> centers) {
  CentroidSet set;
  set.centers = std::move(centers);
  return set;
}

PersistenceDiagram diagram_of(std::vector<DiagramPoint> pts) {
  PersistenceDiagram d;
  d.points = std::move(pts);
  return d;
}

}  // namespace

TEST_CASE("bandwidths are half the nearest-neighbor distance") {
  const auto two = build_vectorizer(centroids({{0.0, 0.0}, {2.0, 0.0}}));
  REQUIRE(two.bandwidths.size() == 2);
  CHECK(two.bandwidths[0] == doctest::Approx(1.0));
  CHECK(two.bandwidths[1] == doctest::Approx(1.0));

  const auto three = build_vectorizer(centroids({{0.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}}));
  REQUIRE(three.bandwidths.size() == 3);
  CHECK(three.bandwidths[0] == doctest::Approx(1.0));
  CHECK(three.bandwidths[1] == doctest::Approx(0.5));
  CHECK(three.bandwidths[2] == doctest::Approx(0.5));
}

TEST_CASE("single center falls back to the support radius") {
  const auto v = build_vectorizer(centroids({{1.0, 1.0}}), 4.0);
  REQUIRE(v.bandwidths.size() == 1);
  CHECK(v.bandwidths[0] == doctest::Approx(4.0));
}

TEST_CASE("duplicate centers are rejected") {
  CHECK_THROWS_AS(build_vectorizer(centroids({{1.0, 0.0}, {1.0, 0.0}})), Error);
}

TEST_CASE("kernel mass hand values") {
  const auto v = build_vectorizer(centroids({{0.0, 0.0}, {2.0, 0.0}}));

  const auto empty = vectorize(v, diagram_of({}));
  REQUIRE(empty.size() == 2);
  CHECK(empty(0) == 0.0);
  CHECK(empty(1) == 0.0);

  const auto unit = vectorize(v, diagram_of({{0.0, 0.0, 1.0}}));
  CHECK(unit(0) == doctest::Approx(1.0));
  CHECK(unit(1) == doctest::Approx(std::exp(-4.0)));

  const auto doubled = vectorize(v, diagram_of({{0.0, 0.0, 2.0}}));
  CHECK(doubled(0) == doctest::Approx(2.0 * unit(0)));
  CHECK(doubled(1) == doctest::Approx(2.0 * unit(1)));
}

TEST_CASE("vectorization is linear in the measure") {
  std::mt19937_64 rng(5);
  const auto v = build_vectorizer(centroids({{0.2, 0.8}, {1.0, 1.5}, {0.5, 1.9}}));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DiagramPoint> xs, ys;
    for (int i = 0; i < 5; ++i) {
      xs.push_back({uniform01(rng), 1.0 + uniform01(rng), 0.2 + uniform01(rng)});
      ys.push_back({uniform01(rng), 1.0 + uniform01(rng), 0.2 + uniform01(rng)});
    }
    const double a = 0.5 + uniform01(rng);
    const double b = 0.5 + uniform01(rng);
    std::vector<DiagramPoint> mix;
    for (auto p : xs) {
      p.weight *= a;
      mix.push_back(p);
    }
    for (auto p : ys) {
      p.weight *= b;
      mix.push_back(p);
    }
    const auto vx = vectorize(v, diagram_of(xs));
    const auto vy = vectorize(v, diagram_of(ys));
    const auto vm = vectorize(v, diagram_of(mix));
    for (int j = 0; j < 3; ++j) {
      CHECK(vm(j) == doctest::Approx(a * vx(j) + b * vy(j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("adding a point raises every coordinate, mass bounds hold") {
  std::mt19937_64 rng(6);
  const auto v = build_vectorizer(centroids({{0.0, 0.5}, {1.2, 1.8}}));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DiagramPoint> pts;
    double mass = 0.0;
    for (int i = 0; i < 6; ++i) {
      pts.push_back({2.0 * uniform01(rng), 2.0 * uniform01(rng), 0.1 + uniform01(rng)});
      mass += pts.back().weight;
    }
    const auto base = vectorize(v, diagram_of(pts));
    for (int j = 0; j < 2; ++j) {
      CHECK(base(j) >= 0.0);
      CHECK(base(j) <= mass);
    }

    auto more = pts;
    more.push_back({uniform01(rng), uniform01(rng), 0.3});
    const auto extended = vectorize(v, diagram_of(more));
    for (int j = 0; j < 2; ++j) {
      CHECK(extended(j) > base(j));
    }
  }
}

TEST_CASE("kernel masses move slowly under point perturbations") {
  // the kernel's slope is bounded, so each coordinate moves by at most
  // mass * sup|psi'| * eps / sigma_j under an eps displacement of every point
  const double lipschitz = std::sqrt(2.0 / std::exp(1.0));
  std::mt19937_64 rng(8);
  const auto v = build_vectorizer(centroids({{0.3, 0.9}, {1.4, 1.6}, {0.8, 0.1}}));
  for (int trial = 0; trial < 20; ++trial) {
    const double eps = 0.001 + 0.01 * uniform01(rng);
    std::vector<DiagramPoint> pts, moved;
    double mass = 0.0;
    for (int i = 0; i < 8; ++i) {
      DiagramPoint p{2.0 * uniform01(rng), 2.0 * uniform01(rng), 0.1 + uniform01(rng)};
      pts.push_back(p);
      mass += p.weight;
      const double angle = 6.2831853 * uniform01(rng);
      p.birth += eps * std::cos(angle);
      p.death += eps * std::sin(angle);
      moved.push_back(p);
    }
    const auto before = vectorize(v, diagram_of(pts));
    const auto after = vectorize(v, diagram_of(moved));
    for (int j = 0; j < 3; ++j) {
      const double bound = mass * lipschitz * eps / v.bandwidths[static_cast<std::size_t>(j)];
      CHECK(std::abs(after(j) - before(j)) <= bound + 1e-12);
    }
  }
}
