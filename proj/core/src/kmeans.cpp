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

#include "kvote/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kvote/error.hpp"
#include "kvote/rng.hpp"

namespace kvote {

void KMeansConfig::validate() const {
  if (!(reassignment_ratio > 0.0 && reassignment_ratio <= 1.0))
    throw ValidationError("KMeansConfig.reassignment_ratio: must be in (0, 1]");
  if (batch_size < 1) throw ValidationError("KMeansConfig.batch_size: must be >= 1");
  if (n_init < 1) throw ValidationError("KMeansConfig.n_init: must be >= 1");
  if (max_iter < 1) throw ValidationError("KMeansConfig.max_iter: must be >= 1");
}

namespace {

// Nearest center per row of X; ties go to the smallest center index.
// Uses ||x-c||^2 = ||x||^2 - 2 x.c + ||c||^2 so the inner product is one GEMM.
void nearest_centers(const Matrix& X, const Matrix& C, std::vector<int>& idx, Vector* sqdist) {
  const Eigen::Index m = X.rows();
  const Eigen::Index k = C.rows();
  Matrix cross = X * C.transpose();              // m x k
  Vector xsq = X.rowwise().squaredNorm();
  Vector csq = C.rowwise().squaredNorm();
  idx.resize(static_cast<std::size_t>(m));
  if (sqdist) sqdist->resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = 0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double d = xsq[i] - 2.0 * cross(i, j) + csq[j];
      if (d < best) {
        best = d;
        best_j = static_cast<int>(j);
      }
    }
    idx[static_cast<std::size_t>(i)] = best_j;
    if (sqdist) (*sqdist)[i] = std::max(best, 0.0);
  }
}

double full_inertia(const Matrix& X, const Matrix& C) {
  std::vector<int> idx;
  Vector sq;
  nearest_centers(X, C, idx, &sq);
  return sq.sum();
}

Matrix init_centers(const Matrix& X, int k, KMeansInit init, Rng& rng) {
  const Eigen::Index n = X.rows();
  Matrix centers(k, X.cols());
  if (init == KMeansInit::Random) {
    auto rows = sample_without_replacement(n, k, rng);
    for (int j = 0; j < k; ++j) centers.row(j) = X.row(rows[static_cast<std::size_t>(j)]);
    return centers;
  }
  // k-means++: D^2 sampling.
  std::uniform_int_distribution<Eigen::Index> any_row(0, n - 1);
  centers.row(0) = X.row(any_row(rng));
  Vector d2 = (X.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen;
    if (total > 0.0 && std::isfinite(total)) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double target = u(rng);
      double acc = 0.0;
      chosen = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = any_row(rng);  // all remaining mass at the centers already
    }
    centers.row(j) = X.row(chosen);
    d2 = d2.cwiseMin((X.rowwise() - centers.row(j)).rowwise().squaredNorm());
  }
  return centers;
}

struct Restart {
  Matrix centers;
  double inertia = std::numeric_limits<double>::infinity();
};

Restart run_restart(const Matrix& X, int k, const KMeansConfig& cfg, std::uint64_t seed) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  Rng rng(seed);

  Matrix centers = init_centers(X, k, cfg.init, rng);
  const Matrix init_snapshot = centers;

  const std::int64_t batch = std::min<std::int64_t>(cfg.batch_size, n);
  const bool full_batch = batch == n;

  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  std::vector<int> assign;
  Matrix batch_points(batch, d);
  Matrix batch_sum(k, d);
  std::vector<double> batch_count(static_cast<std::size_t>(k));
  std::uniform_int_distribution<Eigen::Index> any_row(0, n - 1);

  const double tol_sq = cfg.tol * cfg.tol;
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    const Matrix* view = &X;
    if (!full_batch) {
      auto rows = sample_without_replacement(n, batch, rng);
      for (std::int64_t i = 0; i < batch; ++i)
        batch_points.row(i) = X.row(rows[static_cast<std::size_t>(i)]);
      view = &batch_points;
    }
    nearest_centers(*view, centers, assign, nullptr);

    batch_sum.setZero();
    std::fill(batch_count.begin(), batch_count.end(), 0.0);
    for (std::int64_t i = 0; i < batch; ++i) {
      const int j = assign[static_cast<std::size_t>(i)];
      batch_sum.row(j) += view->row(i);
      batch_count[static_cast<std::size_t>(j)] += 1.0;
    }

    double shift_sq = 0.0;
    for (int j = 0; j < k; ++j) {
      const double bc = batch_count[static_cast<std::size_t>(j)];
      if (bc == 0.0) continue;
      counts[static_cast<std::size_t>(j)] += bc;
      const Vector delta =
          (batch_sum.row(j) - bc * centers.row(j)).transpose() / counts[static_cast<std::size_t>(j)];
      centers.row(j) += delta.transpose();
      shift_sq += delta.squaredNorm();
    }

    // Starved centers are re-seeded to random points and made plastic again.
    if (k > 1) {
      const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
      const double max_count = *std::max_element(counts.begin(), counts.end());
      if (total > 0.0 && max_count > 0.0) {
        for (int j = 0; j < k; ++j) {
          if (counts[static_cast<std::size_t>(j)] < cfg.reassignment_ratio * max_count) {
            centers.row(j) = X.row(any_row(rng));
            counts[static_cast<std::size_t>(j)] = 1.0;
            shift_sq = std::numeric_limits<double>::infinity();
          }
        }
      }
    }

    if (shift_sq <= tol_sq) break;
  }

  Restart out;
  out.centers = std::move(centers);
  out.inertia = full_inertia(X, out.centers);
  const double init_inertia = full_inertia(X, init_snapshot);
  if (init_inertia < out.inertia) {
    out.centers = init_snapshot;
    out.inertia = init_inertia;
  }
  return out;
}

}  // namespace

KMeansResult fit_kmeans(const Dataset& data, int k, const KMeansConfig& config, std::uint64_t seed) {
  config.validate();
  const Eigen::Index n = data.n();
  if (n == 0) throw ValidationError("fit_kmeans: empty dataset");
  if (k < 1 || k > n) throw ValidationError("fit_kmeans: k must be in [1, n]");

  Restart best;
  for (int r = 0; r < config.n_init; ++r) {
    Restart candidate = run_restart(data.points, k, config, derive_seed({seed, 0x6b6dULL, static_cast<std::uint64_t>(r)}));
    if (candidate.inertia < best.inertia) best = std::move(candidate);
  }

  std::vector<int> assign;
  Vector sq;
  nearest_centers(data.points, best.centers, assign, &sq);

  KMeansResult result;
  result.labeling = Labeling::from_assignments(std::move(assign));
  result.centers = std::move(best.centers);
  result.inertia = sq.sum();
  return result;
}

}  // namespace kvote
