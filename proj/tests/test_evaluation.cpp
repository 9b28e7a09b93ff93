#include "tada/evaluation.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "tada/rng.hpp"

using namespace tada;

namespace {

std::vector<double> random_scores(std::size_t n, std::mt19937_64& rng, bool with_ties = false) {
  std::vector<double> s(n);
  for (auto& x : s) {
    x = uniform01(rng);
    if (with_ties && rng() % 3 == 0) x = std::round(x * 10.0) / 10.0;
  }
  return s;
}

std::vector<std::uint8_t> random_labels(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::uint8_t> l(n);
  bool pos = false, neg = false;
  for (auto& x : l) {
    x = rng() % 4 == 0 ? 1 : 0;
    (x ? pos : neg) = true;
  }
  if (!pos) l[0] = 1;
  if (!neg) l[1] = 0;
  return l;
}

}  // namespace

TEST_CASE("roc auc hand values") {
  const std::vector<std::uint8_t> labels = {0, 0, 1, 1};
  CHECK(roc_auc(std::vector<double>{0.0, 0.0, 1.0, 1.0}, labels) == doctest::Approx(1.0));
  CHECK(roc_auc(std::vector<double>{1.0, 1.0, 0.0, 0.0}, labels) == doctest::Approx(0.0));
  CHECK(roc_auc(std::vector<double>{0.1, 0.4, 0.35, 0.8}, labels) == doctest::Approx(0.75));
}

TEST_CASE("roc auc counts ties as half") {
  const std::vector<double> scores = {0.5, 0.5};
  const std::vector<std::uint8_t> labels = {0, 1};
  CHECK(roc_auc(scores, labels) == doctest::Approx(0.5));
}

TEST_CASE("roc auc needs both classes") {
  const std::vector<double> scores = {0.1, 0.2};
  CHECK_THROWS_AS(roc_auc(scores, std::vector<std::uint8_t>{1, 1}), Error);
  CHECK_THROWS_AS(roc_auc(scores, std::vector<std::uint8_t>{0, 0}), Error);
}

TEST_CASE("roc auc of negated scores is the complement") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + rng() % 50;
    auto scores = random_scores(n, rng);  // distinct with probability 1
    const auto labels = random_labels(n, rng);
    std::vector<double> negated(n);
    for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i];
    CHECK(roc_auc(scores, labels) + roc_auc(negated, labels) == doctest::Approx(1.0));
  }
}

TEST_CASE("pr auc hand values") {
  CHECK(pr_auc(std::vector<double>{0.1, 0.9, 0.8, 0.2}, std::vector<std::uint8_t>{0, 1, 1, 0}) ==
        doctest::Approx(1.0));

  // constant scores collapse to a single threshold: area = prevalence
  CHECK(pr_auc(std::vector<double>{1.0, 1.0, 1.0, 1.0}, std::vector<std::uint8_t>{0, 1, 0, 0}) ==
        doctest::Approx(0.25));

  CHECK(pr_auc(std::vector<double>{3.0, 2.0, 1.0}, std::vector<std::uint8_t>{1, 0, 1}) ==
        doctest::Approx(5.0 / 6.0));

  CHECK_THROWS_AS(pr_auc(std::vector<double>{1.0, 2.0}, std::vector<std::uint8_t>{0, 0}), Error);
}

TEST_CASE("range pr auc hand values") {
  // one range, fully outscored
  CHECK(range_pr_auc(std::vector<double>{5.0, 4.0, 1.0, 0.5},
                     std::vector<std::uint8_t>{1, 1, 0, 0}) == doctest::Approx(1.0));

  // one hit per range, no false positives above them
  CHECK(range_pr_auc(std::vector<double>{9.0, 0.1, 0.2, 8.0, 0.3, 0.0},
                     std::vector<std::uint8_t>{1, 1, 0, 1, 1, 0}) == doctest::Approx(1.0));

  // two ranges, detector only fires inside the first: recall plateaus at 1/2
  // until the second range is reached at precision 1/3
  const std::vector<double> scores = {10, 9, 8, 7, 6, 0.5, 0.2, 5, 4, 3};
  const std::vector<std::uint8_t> labels = {1, 1, 0, 0, 0, 1, 1, 0, 0, 0};
  CHECK(range_pr_auc(scores, labels) == doctest::Approx(0.5 + 0.5 / 3.0));

  CHECK_THROWS_AS(
      range_pr_auc(std::vector<double>{1.0, 2.0}, std::vector<std::uint8_t>{0, 0}), Error);
}

TEST_CASE("range pr auc equals pr auc when all ranges have length one") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 30 + rng() % 40;
    const auto scores = random_scores(n, rng, true);
    std::vector<std::uint8_t> labels(n, 0);
    for (std::size_t i = 0; i < n; i += 2) {
      if (rng() % 3 == 0) labels[i] = 1;  // isolated positives only
    }
    if (std::none_of(labels.begin(), labels.end(), [](auto l) { return l != 0; })) labels[0] = 1;
    CHECK(range_pr_auc(scores, labels) == doctest::Approx(pr_auc(scores, labels)).epsilon(1e-12));
  }
}

TEST_CASE("metrics are invariant under monotone score transforms") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 25 + rng() % 50;
    const auto scores = random_scores(n, rng, true);
    auto labels = random_labels(n, rng);
    labels[n / 2] = 1;  // ensure a range exists

    std::vector<double> mapped(n);
    for (std::size_t i = 0; i < n; ++i) {
      mapped[i] = std::exp(3.0 * scores[i]) + 0.1 * scores[i];
    }
    CHECK(roc_auc(mapped, labels) == doctest::Approx(roc_auc(scores, labels)).epsilon(1e-12));
    CHECK(pr_auc(mapped, labels) == doctest::Approx(pr_auc(scores, labels)).epsilon(1e-12));
    CHECK(range_pr_auc(mapped, labels) ==
          doctest::Approx(range_pr_auc(scores, labels)).epsilon(1e-12));
  }
}

TEST_CASE("metric results live in the unit interval") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + rng() % 30;
    const auto scores = random_scores(n, rng, true);
    const auto labels = random_labels(n, rng);
    const auto result = evaluate(scores, labels);
    for (double m : {result.roc_auc, result.pr_auc, result.range_pr_auc}) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }
    CHECK(result.n_anomaly_ranges >= 1);
  }
}

TEST_CASE("evaluate counts contiguous ranges") {
  const std::vector<double> scores = {1, 2, 3, 4, 5, 6, 7};
  const std::vector<std::uint8_t> labels = {1, 1, 0, 1, 0, 0, 1};
  const auto result = evaluate(scores, labels);
  CHECK(result.n_anomaly_ranges == 3);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(roc_auc(std::vector<double>{1.0}, std::vector<std::uint8_t>{1, 0}), Error);
  CHECK_THROWS_AS(evaluate({}, {}), Error);
  const std::vector<double> bad = {1.0, std::nan("")};
  CHECK_THROWS_AS(roc_auc(bad, std::vector<std::uint8_t>{0, 1}), Error);
}
