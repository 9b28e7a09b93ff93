#include "tada/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "tada/rng.hpp"

using namespace tada;

namespace {

Eigen::MatrixXd random_matrix(std::int64_t n, std::int64_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  NormalDraw normal;
  Eigen::MatrixXd m(n, d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < d; ++j) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace

TEST_CASE("plain fit on two points") {
  Eigen::MatrixXd v(2, 2);
  v << 0, 0, 2, 2;
  const auto model = fit_plain(v);
  CHECK(model.mu(0) == doctest::Approx(1.0));
  CHECK(model.mu(1) == doctest::Approx(1.0));
  CHECK(model.sigma(0, 0) == doctest::Approx(1.0));
  CHECK(model.sigma(0, 1) == doctest::Approx(1.0));
  CHECK(model.sigma(1, 0) == doctest::Approx(1.0));
  CHECK(model.sigma(1, 1) == doctest::Approx(1.0));
  CHECK(model.estimator == Estimator::kPlain);
}

TEST_CASE("plain fit handles identical rows through the ridge") {
  Eigen::MatrixXd v(4, 3);
  for (int i = 0; i < 4; ++i) v.row(i) << 1.0, 2.0, 3.0;
  const auto model = fit_plain(v);
  CHECK(model.sigma.isZero());
  CHECK(model.lambda > 0.0);
  Eigen::VectorXd probe(3);
  probe << 1.0, 2.0, 4.0;
  CHECK(std::isfinite(model.score(probe)));
  CHECK(model.score(v.row(0).transpose()) == doctest::Approx(0.0));
}

TEST_CASE("plain fit diagonal example") {
  // rows of sqrt(2) * identity, mean-centered, give a diagonal covariance
  Eigen::MatrixXd v(2, 2);
  v << std::sqrt(2.0), 0, 0, std::sqrt(2.0);
  const auto model = fit_plain(v);
  CHECK(model.sigma(0, 1) == doctest::Approx(-0.5));
  Eigen::MatrixXd w(4, 2);
  w << 1, 1, 1, -1, -1, 1, -1, -1;
  const auto diag = fit_plain(w);
  CHECK(diag.sigma(0, 0) == doctest::Approx(1.0));
  CHECK(diag.sigma(1, 1) == doctest::Approx(1.0));
  CHECK(diag.sigma(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("plain fit needs two rows") {
  Eigen::MatrixXd v(1, 2);
  v << 1, 2;
  CHECK_THROWS_AS(fit_plain(v), Error);
}

TEST_CASE("score hand values") {
  FitOptions no_ridge;
  no_ridge.ridge_coeff = 0.0;
  no_ridge.ridge_floor = 0.0;

  const auto identity = from_moments(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2),
                                     no_ridge);
  Eigen::VectorXd v(2);
  v << 3, 4;
  CHECK(identity.score(v) == doctest::Approx(5.0));
  CHECK(identity.score(Eigen::VectorXd::Zero(2)) == doctest::Approx(0.0));

  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2, 2);
  sigma(0, 0) = 4.0;
  sigma(1, 1) = 1.0;
  const auto aniso = from_moments(Eigen::VectorXd::Zero(2), sigma, no_ridge);
  v << 2, 0;
  CHECK(aniso.score(v) == doctest::Approx(1.0));

  Eigen::VectorXd wrong(3);
  wrong << 1, 2, 3;
  CHECK_THROWS_AS(identity.score(wrong), Error);
}

TEST_CASE("center scores hand values") {
  FitOptions no_ridge;
  no_ridge.ridge_coeff = 0.0;
  no_ridge.ridge_floor = 0.0;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(2, 2);
  sigma(0, 0) = 4.0;
  sigma(1, 1) = 1.0;
  const auto model = from_moments(Eigen::VectorXd::Zero(2), sigma, no_ridge);

  Eigen::VectorXd v(2);
  v << 2, 3;
  const auto s = model.center_scores(v);
  CHECK(s(0) == doctest::Approx(1.0));
  CHECK(s(1) == doctest::Approx(3.0));
  CHECK(model.center_scores(model.mu).isZero());

  const auto doubled = from_moments(Eigen::VectorXd::Zero(2), 2.0 * sigma, no_ridge);
  const auto s2 = doubled.center_scores(v);
  CHECK(s2(0) == doctest::Approx(s(0) / std::sqrt(2.0)));
  CHECK(s2(1) == doctest::Approx(s(1) / std::sqrt(2.0)));
}

TEST_CASE("mcd pins the tight subset") {
  Eigen::MatrixXd v(5, 1);
  v << 0, 0, 0, 0, 100;
  const auto model = fit_mcd(v, 0.2);
  CHECK(model.mu(0) == 0.0);
  CHECK(model.estimator == Estimator::kMcd);
  CHECK(model.h == doctest::Approx(0.2));
}

TEST_CASE("mcd with h = 0 matches the plain fit") {
  const auto vectors = random_matrix(60, 3, 21);
  const auto plain = fit_plain(vectors);
  const auto mcd = fit_mcd(vectors, 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(mcd.mu(i) == doctest::Approx(plain.mu(i)).epsilon(1e-12));
    for (int j = 0; j < 3; ++j) {
      CHECK(mcd.sigma(i, j) == doctest::Approx(plain.sigma(i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("mcd location stays near zero on clean data") {
  const auto vectors = random_matrix(400, 2, 33);
  const auto model = fit_mcd(vectors, 0.1);
  const double tol = 4.0 / std::sqrt(400.0);
  CHECK(std::abs(model.mu(0)) < tol);
  CHECK(std::abs(model.mu(1)) < tol);
}

TEST_CASE("mcd resists planted outliers better than the plain mean") {
  std::mt19937_64 rng(55);
  NormalDraw normal;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXd v(108, 2);
    Eigen::Vector2d clean_sum = Eigen::Vector2d::Zero();
    for (int i = 0; i < 100; ++i) {
      v(i, 0) = normal(rng);
      v(i, 1) = normal(rng);
      clean_sum += v.row(i).transpose();
    }
    for (int i = 100; i < 108; ++i) {
      v(i, 0) = 50.0 + normal(rng);
      v(i, 1) = 50.0 + normal(rng);
    }
    const Eigen::Vector2d clean_mean = clean_sum / 100.0;

    FitOptions opts;
    opts.seed = rng();
    const auto robust = fit_mcd(v, 0.1, opts);
    const auto plain = fit_plain(v, opts);
    const double robust_err = (robust.mu - clean_mean).norm();
    const double plain_err = (plain.mu - clean_mean).norm();
    CHECK(robust_err < plain_err);
    CHECK(robust_err < 1.0);
  }
}

TEST_CASE("mcd subset must leave enough rows") {
  const auto vectors = random_matrix(10, 4, 3);
  CHECK_THROWS_AS(fit_mcd(vectors, 0.9), Error);   // subset of 1 < dim+1
  CHECK_THROWS_AS(fit_mcd(vectors, 1.0), Error);   // h out of range
  CHECK_THROWS_AS(fit_mcd(vectors, -0.1), Error);  // h out of range
}

TEST_CASE("affine equivariance of the plain score") {
  FitOptions no_ridge;
  no_ridge.ridge_coeff = 0.0;
  no_ridge.ridge_floor = 0.0;
  std::mt19937_64 rng(77);
  NormalDraw normal;
  for (int trial = 0; trial < 10; ++trial) {
    const auto vectors = random_matrix(50, 3, rng());

    Eigen::MatrixXd a(3, 3);
    do {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a(i, j) = normal(rng);
      }
    } while (std::abs(a.determinant()) < 0.1);
    Eigen::VectorXd b(3);
    for (int i = 0; i < 3; ++i) b(i) = normal(rng);

    Eigen::MatrixXd mapped = (vectors * a.transpose()).rowwise() + b.transpose();
    const auto base = fit_plain(vectors, no_ridge);
    const auto moved = fit_plain(mapped, no_ridge);

    Eigen::VectorXd probe(3);
    for (int i = 0; i < 3; ++i) probe(i) = normal(rng);
    const double s1 = base.score(probe);
    const double s2 = moved.score(a * probe + b);
    CHECK(s2 == doctest::Approx(s1).epsilon(1e-6));
  }
}

TEST_CASE("from_moments rejects bad shapes") {
  CHECK_THROWS_AS(from_moments(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Zero(3, 3)), Error);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(from_moments(Eigen::VectorXd::Zero(2), asym), Error);
}

TEST_CASE("threshold hand values") {
  std::vector<double> scores(100);
  for (int i = 0; i < 100; ++i) scores[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(scores.begin(), scores.end(), std::mt19937_64(4));

  const auto t = calibrate_threshold(scores, 0.2, 0.1);  // alpha - delta = 0.10
  CHECK(t.t_hat == doctest::Approx(90.0));
  CHECK(t.alpha == 0.2);
  CHECK(t.delta == 0.1);

  const std::vector<double> flat(50, 3.25);
  CHECK(calibrate_threshold(flat, 0.5, 0.2).t_hat == doctest::Approx(3.25));
}

TEST_CASE("threshold level validation") {
  const std::vector<double> scores = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(calibrate_threshold(scores, 0.0, 0.1), Error);
  CHECK_THROWS_AS(calibrate_threshold(scores, 1.0, 0.1), Error);
  CHECK_THROWS_AS(calibrate_threshold(scores, 0.2, 0.0), Error);
  CHECK_THROWS_AS(calibrate_threshold(scores, 0.2, 0.2), Error);
  CHECK_THROWS_AS(calibrate_threshold(scores, 0.2, 0.3), Error);
  CHECK_THROWS_AS(calibrate_threshold({}, 0.2, 0.1), Error);
}

TEST_CASE("empirical exceedance never overshoots the target") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 50 + rng() % 400;
    std::vector<double> scores(n);
    for (auto& s : scores) {
      s = uniform01(rng);
      if (rng() % 4 == 0) s = std::round(s * 8.0) / 8.0;  // inject ties
    }
    const double alpha = 0.05 + 0.4 * uniform01(rng);
    const double delta = alpha * (0.1 + 0.8 * uniform01(rng));
    const auto t = calibrate_threshold(scores, alpha, delta);
    const auto exceed = static_cast<double>(
        std::count_if(scores.begin(), scores.end(), [&](double s) { return s > t.t_hat; }));
    CHECK(exceed / static_cast<double>(n) <= alpha - delta + 1e-12);
  }
}

TEST_CASE("advisory concentration bound flag") {
  std::mt19937_64 rng(95);
  std::vector<double> small(100);
  for (auto& s : small) s = uniform01(rng);
  CHECK_FALSE(calibrate_threshold(small, 0.2, 0.1).advisory_bound_ok);

  std::vector<double> large(100000);
  for (auto& s : large) s = uniform01(rng);
  CHECK(calibrate_threshold(large, 0.05, 0.025).advisory_bound_ok);
}
