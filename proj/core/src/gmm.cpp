// Copyright 2026 The kvote Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kvote/gmm.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "kvote/error.hpp"
#include "kvote/kmeans.hpp"
#include "kvote/rng.hpp"

namespace kvote {

void GMMConfig::validate() const {
  if (reg_covar < 0.0) throw ValidationError("GMMConfig.reg_covar: must be >= 0");
  if (n_init < 1) throw ValidationError("GMMConfig.n_init: must be >= 1");
  if (max_iter < 1) throw ValidationError("GMMConfig.max_iter: must be >= 1");
}

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
// Keeps starved components numerically alive, matching common EM practice.
constexpr double kRespFloor = 10.0 * std::numeric_limits<double>::epsilon();

struct Params {
  Vector weights;
  Matrix means;        // k x d
  Matrix covariances;  // per type
};

// Fills log_prob(i, j) = log w_j + log N(x_i | mu_j, Sigma_j).
void weighted_log_prob(const Matrix& X, const Params& p, CovarianceType type, Matrix& log_prob) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  const Eigen::Index k = p.means.rows();
  log_prob.resize(n, k);

  if (type == CovarianceType::Tied) {
    Eigen::LLT<Matrix> llt(p.covariances);
    if (llt.info() != Eigen::Success)
      throw RuntimeFailure("fit_gmm: tied covariance not positive definite");
    const Matrix L = llt.matrixL();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(L(i, i));
    for (Eigen::Index j = 0; j < k; ++j) {
      Matrix centered = X.rowwise() - p.means.row(j);
      // Solve L z = (x - mu); the quadratic form is ||z||^2.
      Matrix z = L.triangularView<Eigen::Lower>().solve(centered.transpose());
      log_prob.col(j) = -0.5 * (z.colwise().squaredNorm().transpose().array() +
                                static_cast<double>(d) * kLog2Pi + log_det) +
                        std::log(p.weights[j]);
    }
    return;
  }

  for (Eigen::Index j = 0; j < k; ++j) {
    if (type == CovarianceType::Spherical) {
      const double var = p.covariances(j, 0);
      const double log_det = static_cast<double>(d) * std::log(var);
      Vector sq = (X.rowwise() - p.means.row(j)).rowwise().squaredNorm();
      log_prob.col(j) =
          -0.5 * (sq.array() / var + static_cast<double>(d) * kLog2Pi + log_det) + std::log(p.weights[j]);
    } else {  // Diag
      Eigen::ArrayXd inv_var = p.covariances.row(j).transpose().array().inverse();
      double log_det = p.covariances.row(j).array().log().sum();
      Eigen::ArrayXXd centered = (X.rowwise() - p.means.row(j)).array();
      Vector quad = (centered.square().rowwise() * inv_var.transpose()).rowwise().sum();
      log_prob.col(j) =
          -0.5 * (quad.array() + static_cast<double>(d) * kLog2Pi + log_det) + std::log(p.weights[j]);
    }
  }
}

// Row-wise logsumexp; returns total log-likelihood and normalized
// responsibilities in-place.
double normalize_responsibilities(Matrix& log_prob) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < log_prob.rows(); ++i) {
    const double m = log_prob.row(i).maxCoeff();
    const double lse = m + std::log((log_prob.row(i).array() - m).exp().sum());
    log_prob.row(i) = (log_prob.row(i).array() - lse).exp();
    total += lse;
  }
  return total;
}

Params m_step(const Matrix& X, const Matrix& resp, CovarianceType type, double reg) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = resp.cols();

  Params p;
  Vector nk = resp.colwise().sum().transpose().array() + kRespFloor;
  p.weights = nk / nk.sum();
  p.means = (resp.transpose() * X).array().colwise() / nk.array();

  if (type == CovarianceType::Tied) {
    Matrix scatter = X.transpose() * X;
    for (Eigen::Index j = 0; j < k; ++j)
      scatter -= nk[j] * (p.means.row(j).transpose() * p.means.row(j));
    p.covariances = scatter / static_cast<double>(n);
    p.covariances.diagonal().array() += reg;
    return p;
  }

  // E[x^2] - mean^2, clamped at zero before regularization.
  Matrix ex2 = (resp.transpose() * X.cwiseProduct(X)).array().colwise() / nk.array();
  Matrix var = (ex2 - p.means.cwiseProduct(p.means)).cwiseMax(0.0);
  if (type == CovarianceType::Diag) {
    p.covariances = var.array() + reg;
  } else {  // Spherical: average the diagonal variances across dimensions
    p.covariances = var.rowwise().mean().array() + reg;
    p.covariances.conservativeResize(k, 1);
  }
  return p;
}

GMMResult run_em(const Dataset& data, int k, const GMMConfig& cfg, std::uint64_t seed) {
  const Matrix& X = data.points;
  const Eigen::Index n = X.rows();

  // k-means labeling seeds the responsibilities.
  KMeansConfig init_cfg;
  init_cfg.n_init = 1;
  init_cfg.max_iter = 50;
  init_cfg.reassignment_ratio = 1e-6;
  KMeansResult init = fit_kmeans(data, k, init_cfg, derive_seed({seed, 0x676d6dULL}));

  Matrix resp = Matrix::Zero(n, k);
  {
    Vector csq = init.centers.rowwise().squaredNorm();
    Matrix cross = X * init.centers.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index best_j = 0;
      for (Eigen::Index j = 0; j < k; ++j) {
        const double v = csq[j] - 2.0 * cross(i, j);
        if (v < best) {
          best = v;
          best_j = j;
        }
      }
      resp(i, best_j) = 1.0;
    }
  }

  Params params = m_step(X, resp, cfg.covariance_type, cfg.reg_covar);

  GMMResult result;
  result.covariance_type = cfg.covariance_type;

  Matrix log_prob;
  double prev_mean_ll = -std::numeric_limits<double>::infinity();
  bool fresh_e_step = false;
  double ll = 0.0;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    weighted_log_prob(X, params, cfg.covariance_type, log_prob);
    ll = normalize_responsibilities(log_prob);  // log_prob now holds resp
    if (!std::isfinite(ll))
      throw RuntimeFailure("fit_gmm: non-finite log-likelihood at iteration " + std::to_string(iter));
    result.log_likelihood_path.push_back(ll);
    fresh_e_step = true;

    const double mean_ll = ll / static_cast<double>(n);
    if (iter > 0 && mean_ll - prev_mean_ll < cfg.tol) break;
    prev_mean_ll = mean_ll;

    params = m_step(X, log_prob, cfg.covariance_type, cfg.reg_covar);
    fresh_e_step = false;
  }
  if (!fresh_e_step) {
    weighted_log_prob(X, params, cfg.covariance_type, log_prob);
    ll = normalize_responsibilities(log_prob);
    if (!std::isfinite(ll))
      throw RuntimeFailure("fit_gmm: non-finite log-likelihood at final iteration");
    result.log_likelihood_path.push_back(ll);
  }

  std::vector<int> hard(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index j;
    log_prob.row(i).maxCoeff(&j);
    hard[static_cast<std::size_t>(i)] = static_cast<int>(j);
  }
  result.labeling = Labeling::from_assignments(std::move(hard));
  result.weights = std::move(params.weights);
  result.means = std::move(params.means);
  result.covariances = std::move(params.covariances);
  result.log_likelihood = ll;
  return result;
}

}  // namespace

GMMResult fit_gmm(const Dataset& data, int k, const GMMConfig& config, std::uint64_t seed) {
  config.validate();
  if (data.n() == 0) throw ValidationError("fit_gmm: empty dataset");
  if (k < 1 || k > data.n()) throw ValidationError("fit_gmm: k must be in [1, n]");

  GMMResult best;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.n_init; ++r) {
    GMMResult candidate = run_em(data, k, config, derive_seed({seed, 0x656dULL, static_cast<std::uint64_t>(r)}));
    if (candidate.log_likelihood > best_ll) {
      best_ll = candidate.log_likelihood;
      best = std::move(candidate);
    }
  }
  return best;
}

Matrix gmm_responsibilities(const Matrix& points, const GMMResult& model) {
  Params p{model.weights, model.means, model.covariances};
  Matrix log_prob;
  weighted_log_prob(points, p, model.covariance_type, log_prob);
  normalize_responsibilities(log_prob);
  return log_prob;
}

}  // namespace kvote
