#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "tada/error.hpp"

namespace tada {

enum class Estimator { kPlain, kMcd };

struct FitOptions {
  double ridge_coeff = 1e-9;   // lambda = max(ridge_coeff * trace / dim, ridge_floor)
  double ridge_floor = 1e-12;
  double c0 = 1.0;             // consistency factor applied to the MCD scatter
  int mcd_starts = 50;
  int mcd_cstep_max = 100;
  double mcd_tol = 1e-9;       // relative log-det change treated as converged
  std::uint64_t seed = 0;
};

// Location/scatter summary of the embedding cloud. The inverse is kept as a
// Cholesky factor of sigma + lambda * I; lambda is derived from sigma alone,
// so a model rebuilt from serialized moments scores bit-identically.
struct ScoreModel {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  double lambda = 0.0;
  double h = 0.0;
  double c0 = 1.0;
  Estimator estimator = Estimator::kPlain;
  Eigen::LLT<Eigen::MatrixXd> factor;

  int dimension() const { return static_cast<int>(mu.size()); }

  // Mahalanobis distance sqrt((v - mu)^T (sigma + lambda I)^-1 (v - mu)).
  double score(const Eigen::VectorXd& v) const;

  // Per-coordinate deviations |v_i - mu_i| / sqrt(sigma_ii + lambda); these
  // attribute a flagged window to individual embedding coordinates.
  Eigen::VectorXd center_scores(const Eigen::VectorXd& v) const;
};

// Builds the factorized model from explicit moments.
ScoreModel from_moments(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                        const FitOptions& opts = {});

// Sample mean and biased (1/n) covariance of the rows.
ScoreModel fit_plain(const Eigen::MatrixXd& vectors, const FitOptions& opts = {});

// Minimum covariance determinant: the subset of ceil(n * (1 - h)) rows with
// the smallest covariance determinant, located by random elemental starts
// followed by concentration steps; the two best starts are iterated to
// convergence. h = 0 coincides with fit_plain up to the c0 factor.
ScoreModel fit_mcd(const Eigen::MatrixXd& vectors, double h, const FitOptions& opts = {});

struct Threshold {
  double t_hat = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  bool advisory_bound_ok = true;  // 5 sqrt(alpha (log n) / n) <= delta, with q = 1
};

// Smallest observed score whose empirical exceedance fraction is at most
// alpha - delta. Requires 0 < delta < alpha < 1. The concentration bound
// behind the delta margin depends on an unknown mixing block size, so it is
// checked with q = 1 and reported as a warning only.
Threshold calibrate_threshold(const std::vector<double>& scores, double alpha, double delta);

}  // namespace tada
