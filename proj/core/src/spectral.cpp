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

#include "kvote/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "kvote/error.hpp"
#include "kvote/kmeans.hpp"
#include "kvote/rng.hpp"

namespace kvote {

void SpectralConfig::validate() const {
  if (affinity == Affinity::Precomputed) {
    if (n_neighbors < 1) throw ValidationError("SpectralConfig.n_neighbors: must be >= 1");
  } else {
    if (!(gamma > 0.0)) throw ValidationError("SpectralConfig.gamma: must be > 0");
  }
}

namespace {

double point_distance(const Matrix& X, Eigen::Index i, Eigen::Index j, NeighborMetric metric) {
  switch (metric) {
    case NeighborMetric::L2:
      return (X.row(i) - X.row(j)).norm();
    case NeighborMetric::L1:
      return (X.row(i) - X.row(j)).cwiseAbs().sum();
    case NeighborMetric::Cosine: {
      const double denom = X.row(i).norm() * X.row(j).norm();
      if (denom == 0.0) return 1.0;
      return 1.0 - X.row(i).dot(X.row(j)) / denom;
    }
  }
  return 0.0;
}

Matrix knn_connectivity(const Matrix& X, NeighborMetric metric, int n_neighbors) {
  const Eigen::Index n = X.rows();
  Matrix W = Matrix::Zero(n, n);
  std::vector<std::pair<double, Eigen::Index>> order;
  order.reserve(static_cast<std::size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      order.emplace_back(point_distance(X, i, j, metric), j);
    }
    std::partial_sort(order.begin(), order.begin() + n_neighbors, order.end());
    for (int t = 0; t < n_neighbors; ++t) W(i, order[static_cast<std::size_t>(t)].second) = 1.0;
  }
  // Undirected graph: keep an edge if either endpoint selected it.
  W = W.cwiseMax(W.transpose().eval());
  W.diagonal().setZero();
  return W;
}

}  // namespace

Matrix build_affinity(const Dataset& data, const SpectralConfig& config) {
  config.validate();
  const Matrix& X = data.points;
  const Eigen::Index n = X.rows();
  if (n < 2) throw ValidationError("build_affinity: needs at least 2 points");

  if (config.affinity == Affinity::Precomputed) {
    if (config.n_neighbors >= n)
      throw ValidationError("build_affinity: n_neighbors must be < n for precomputed affinity");
    return knn_connectivity(X, config.metric, config.n_neighbors);
  }

  // Mirrored pairwise fill keeps the kernels bit-exactly symmetric.
  Matrix W(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    W(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = 0.0;
      switch (config.affinity) {
        case Affinity::Rbf:
          v = std::exp(-config.gamma * (X.row(i) - X.row(j)).squaredNorm());
          break;
        case Affinity::Laplacian:
          v = std::exp(-config.gamma * (X.row(i) - X.row(j)).cwiseAbs().sum());
          break;
        case Affinity::Sigmoid:
          v = std::max(0.0, std::tanh(config.gamma * X.row(i).dot(X.row(j)) + 1.0));
          break;
        case Affinity::Precomputed:
          break;  // handled above
      }
      W(i, j) = v;
      W(j, i) = v;
    }
  }
  return W;
}

SpectralBasis laplacian_eigenbasis(const Matrix& affinity) {
  const Eigen::Index n = affinity.rows();
  Vector degree = affinity.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i)
    if (degree[i] <= 0.0) degree[i] = 1.0;
  Vector inv_sqrt = degree.array().rsqrt();

  Matrix L = -(inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal());
  L.diagonal().array() += 1.0;
  // Symmetrize against rounding so the solver sees an exactly
  // self-adjoint operator.
  L = 0.5 * (L + L.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Matrix> solver(L);
  if (solver.info() != Eigen::Success)
    throw RuntimeFailure("laplacian_eigenbasis: eigensolver did not converge");
  return {solver.eigenvectors(), solver.eigenvalues()};
}

Labeling cluster_embedding(const SpectralBasis& basis, int k, std::uint64_t seed) {
  const Eigen::Index n = basis.vectors.rows();
  if (k < 2 || k > n) throw ValidationError("cluster_embedding: k must be in [2, n]");

  Dataset embedded;
  embedded.points = basis.vectors.leftCols(k);
  embedded.id = "spectral-embedding";
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = embedded.points.row(i).norm();
    if (norm > 0.0) embedded.points.row(i) /= norm;
  }

  KMeansConfig cfg;
  cfg.init = KMeansInit::KMeansPlusPlus;
  cfg.n_init = 3;
  cfg.batch_size = n;  // full-batch on the small embedding
  cfg.max_iter = 100;
  cfg.tol = 1e-6;
  cfg.reassignment_ratio = 1e-6;
  return fit_kmeans(embedded, k, cfg, derive_seed({seed, 0x73656dULL})).labeling;
}

Labeling fit_spectral(const Dataset& data, int k, const SpectralConfig& config, std::uint64_t seed) {
  if (k < 2 || k > data.n()) throw ValidationError("fit_spectral: k must be in [2, n]");
  Matrix W = build_affinity(data, config);
  SpectralBasis basis = laplacian_eigenbasis(W);
  return cluster_embedding(basis, k, seed);
}

}  // namespace kvote
