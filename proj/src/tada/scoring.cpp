#include "tada/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tada/rng.hpp"

namespace tada {

namespace {

double ridge_for(const Eigen::MatrixXd& sigma, const FitOptions& opts) {
  if (opts.ridge_coeff == 0.0 && opts.ridge_floor == 0.0) return 0.0;
  const double dim = static_cast<double>(sigma.rows());
  return std::max(opts.ridge_coeff * sigma.trace() / dim, opts.ridge_floor);
}

// Symmetric by construction: only the upper triangle is computed.
Eigen::MatrixXd biased_covariance(const Eigen::MatrixXd& rows, const Eigen::VectorXd& mu) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index k = rows.cols();
  const Eigen::MatrixXd centered = rows.rowwise() - mu.transpose();
  Eigen::MatrixXd sigma(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      const double v = centered.col(i).dot(centered.col(j)) / static_cast<double>(n);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  }
  return sigma;
}

struct Factorized {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double lambda = 0.0;
  double log_det = 0.0;  // of sigma + lambda I
};

Factorized factorize(const Eigen::MatrixXd& sigma, const FitOptions& opts) {
  Factorized out;
  out.lambda = ridge_for(sigma, opts);
  Eigen::MatrixXd work = sigma;
  for (int attempt = 0;; ++attempt) {
    work = sigma;
    work.diagonal().array() += out.lambda;
    out.llt.compute(work);
    if (out.llt.info() == Eigen::Success) break;
    require(attempt < 60, ErrorCode::kDegenerate,
            "covariance matrix cannot be factorized even after regularization");
    out.lambda = out.lambda == 0.0 ? std::max(opts.ridge_floor, 1e-12) : out.lambda * 10.0;
  }
  out.log_det = 2.0 * out.llt.matrixLLT().diagonal().array().log().sum();
  return out;
}

ScoreModel assemble(Eigen::VectorXd mu, Eigen::MatrixXd sigma, double h, Estimator estimator,
                    const FitOptions& opts) {
  ScoreModel m;
  m.mu = std::move(mu);
  m.sigma = std::move(sigma);
  m.h = h;
  m.c0 = opts.c0;
  m.estimator = estimator;
  Factorized f = factorize(m.sigma, opts);
  m.lambda = f.lambda;
  m.factor = std::move(f.llt);
  return m;
}

}  // namespace

double ScoreModel::score(const Eigen::VectorXd& v) const {
  require(v.size() == mu.size(), ErrorCode::kDimensionMismatch,
          "vector dimension does not match the fitted model");
  const Eigen::VectorXd r = v - mu;
  const double s2 = r.dot(factor.solve(r));
  return std::sqrt(std::max(s2, 0.0));
}

Eigen::VectorXd ScoreModel::center_scores(const Eigen::VectorXd& v) const {
  require(v.size() == mu.size(), ErrorCode::kDimensionMismatch,
          "vector dimension does not match the fitted model");
  Eigen::VectorXd out(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double var = sigma(i, i) + lambda;
    require(var > 0.0, ErrorCode::kDegenerate, "non-positive variance after regularization");
    out(i) = std::abs(v(i) - mu(i)) / std::sqrt(var);
  }
  return out;
}

ScoreModel from_moments(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                        const FitOptions& opts) {
  require(sigma.rows() == sigma.cols(), ErrorCode::kDimensionMismatch,
          "covariance matrix must be square");
  require(sigma.rows() == mu.size(), ErrorCode::kDimensionMismatch,
          "mean and covariance dimensions differ");
  require(mu.allFinite() && sigma.allFinite(), ErrorCode::kNonFinite,
          "model moments contain non-finite values");
  require(sigma == sigma.transpose(), ErrorCode::kInvalidArgument,
          "covariance matrix must be symmetric");
  return assemble(mu, sigma, 0.0, Estimator::kPlain, opts);
}

ScoreModel fit_plain(const Eigen::MatrixXd& vectors, const FitOptions& opts) {
  require(vectors.rows() >= 2, ErrorCode::kTooFewSamples,
          "need at least 2 vectors to fit, got " + std::to_string(vectors.rows()));
  require(vectors.allFinite(), ErrorCode::kNonFinite, "vectors contain non-finite values");
  const Eigen::VectorXd mu = vectors.colwise().mean();
  return assemble(mu, biased_covariance(vectors, mu), 0.0, Estimator::kPlain, opts);
}

namespace {

struct Candidate {
  std::vector<std::int64_t> subset;
  double log_det = std::numeric_limits<double>::infinity();
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
};

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& rows, const std::vector<std::int64_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), rows.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = rows.row(idx[i]);
  return out;
}

void refresh_moments(Candidate& c, const Eigen::MatrixXd& rows, const FitOptions& opts) {
  const Eigen::MatrixXd sub = take_rows(rows, c.subset);
  c.mu = sub.colwise().mean();
  c.sigma = biased_covariance(sub, c.mu);
  c.log_det = factorize(c.sigma, opts).log_det;
}

// One concentration step: rank all rows by Mahalanobis distance under the
// candidate's moments and keep the m closest (ties resolved by row index).
void c_step(Candidate& c, const Eigen::MatrixXd& rows, std::int64_t m, const FitOptions& opts) {
  const Factorized f = factorize(c.sigma, opts);
  const Eigen::Index n = rows.rows();
  std::vector<std::pair<double, std::int64_t>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd r = rows.row(i).transpose() - c.mu;
    dist[static_cast<std::size_t>(i)] = {r.dot(f.llt.solve(r)), i};
  }
  std::sort(dist.begin(), dist.end());
  c.subset.resize(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) c.subset[static_cast<std::size_t>(i)] = dist[static_cast<std::size_t>(i)].second;
  std::sort(c.subset.begin(), c.subset.end());
  refresh_moments(c, rows, opts);
}

void concentrate(Candidate& c, const Eigen::MatrixXd& rows, std::int64_t m, const FitOptions& opts) {
  double prev = c.log_det;
  for (int step = 0; step < opts.mcd_cstep_max; ++step) {
    const std::vector<std::int64_t> before = c.subset;
    c_step(c, rows, m, opts);
    if (c.subset == before) break;
    if (std::abs(c.log_det - prev) <= opts.mcd_tol * std::max(1.0, std::abs(prev))) break;
    prev = c.log_det;
  }
}

}  // namespace

ScoreModel fit_mcd(const Eigen::MatrixXd& vectors, double h, const FitOptions& opts) {
  require(h >= 0.0 && h < 1.0, ErrorCode::kInvalidArgument,
          "contamination fraction h must lie in [0, 1)");
  require(vectors.rows() >= 1, ErrorCode::kTooFewSamples, "no vectors to fit");
  require(vectors.allFinite(), ErrorCode::kNonFinite, "vectors contain non-finite values");

  const std::int64_t n = vectors.rows();
  const std::int64_t dim = vectors.cols();
  const std::int64_t m =
      static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * (1.0 - h)));

  ScoreModel model;
  if (m >= n) {
    const Eigen::VectorXd mu = vectors.colwise().mean();
    Eigen::MatrixXd sigma = biased_covariance(vectors, mu) * opts.c0;
    model = assemble(mu, std::move(sigma), h, Estimator::kMcd, opts);
  } else {
    require(m >= dim + 1, ErrorCode::kTooFewSamples,
            "MCD subset size " + std::to_string(m) + " is below the " + std::to_string(dim + 1) +
                " rows needed in dimension " + std::to_string(dim));

    std::mt19937_64 rng(mix_seed(opts.seed, 0x6d6364));
    const std::int64_t elemental = dim + 1;
    std::vector<Candidate> starts(static_cast<std::size_t>(opts.mcd_starts));
    for (auto& cand : starts) {
      std::vector<bool> used(static_cast<std::size_t>(n), false);
      while (static_cast<std::int64_t>(cand.subset.size()) < elemental) {
        const auto i = static_cast<std::int64_t>(uniform01(rng) * static_cast<double>(n));
        const auto ii = std::min(i, n - 1);
        if (!used[static_cast<std::size_t>(ii)]) {
          used[static_cast<std::size_t>(ii)] = true;
          cand.subset.push_back(ii);
        }
      }
      std::sort(cand.subset.begin(), cand.subset.end());
      refresh_moments(cand, vectors, opts);
      c_step(cand, vectors, m, opts);
      c_step(cand, vectors, m, opts);
    }

    std::vector<std::size_t> order(starts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return starts[a].log_det < starts[b].log_det;
    });

    const std::size_t refine = std::min<std::size_t>(2, starts.size());
    std::size_t best = order[0];
    for (std::size_t r = 0; r < refine; ++r) {
      concentrate(starts[order[r]], vectors, m, opts);
      if (starts[order[r]].log_det < starts[best].log_det) best = order[r];
    }

    const Candidate& win = starts[best];
    Eigen::MatrixXd sigma = win.sigma * opts.c0;
    model = assemble(win.mu, std::move(sigma), h, Estimator::kMcd, opts);
  }
  return model;
}

Threshold calibrate_threshold(const std::vector<double>& scores, double alpha, double delta) {
  require(!scores.empty(), ErrorCode::kTooFewSamples, "no scores to calibrate on");
  require(delta > 0.0 && delta < alpha && alpha < 1.0, ErrorCode::kInvalidArgument,
          "levels must satisfy 0 < delta < alpha < 1");
  for (double s : scores) {
    require(std::isfinite(s), ErrorCode::kNonFinite, "scores contain non-finite values");
  }

  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const double budget = (alpha - delta) * n;

  Threshold out;
  out.alpha = alpha;
  out.delta = delta;
  // Walk the distinct values upward; exceedance is non-increasing, so the
  // first admissible value is the smallest.
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double exceed = static_cast<double>(sorted.size() - (j + 1));
    if (exceed <= budget) {
      out.t_hat = sorted[i];
      break;
    }
    i = j + 1;
  }

  const double bound = 5.0 * std::sqrt(alpha) * std::sqrt(std::log(n) / n);
  out.advisory_bound_ok = bound <= delta;
  if (!out.advisory_bound_ok) {
    warn("calibration margin delta is below the concentration bound for this sample size");
  }
  return out;
}

}  // namespace tada
