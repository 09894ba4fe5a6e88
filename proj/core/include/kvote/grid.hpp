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

#ifndef KVOTE_GRID_HPP
#define KVOTE_GRID_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kvote/gmm.hpp"
#include "kvote/hca.hpp"
#include "kvote/kmeans.hpp"
#include "kvote/spectral.hpp"

namespace kvote {

enum class Algorithm { KMeans, Gmm, Hca, Spectral };

enum class MetricId { Aic, Bic, Inertia, Silhouette, Elbow, MaxDiff };

std::string to_string(Algorithm a);
std::string to_string(MetricId m);
Algorithm algorithm_from_string(const std::string& s);
MetricId metric_from_string(const std::string& s);

/// One hyperparameter selection: ordered named values, stringly typed so the
/// grid is uniform across algorithms and round-trips through the cache.
struct HyperSelection {
  std::vector<std::pair<std::string, std::string>> values;

  const std::string& get(const std::string& name) const;
  double get_double(const std::string& name) const;
  int get_int(const std::string& name) const;
  bool has(const std::string& name) const;
  std::string display() const;  // "init=k-means++ reassignment_ratio=0.0001"
};

/// The experiment definition: per algorithm, the hyperparameter selections
/// and the metrics used to read its elbow curves; plus the candidate k range
/// and the master seed every unit of work derives from.
struct AlgorithmGrid {
  Algorithm algorithm = Algorithm::KMeans;
  std::vector<HyperSelection> hypers;
  std::vector<MetricId> metrics;
};

struct GridSpec {
  std::vector<AlgorithmGrid> algorithms;
  int k_min = 2;
  int k_max = 10;
  std::uint64_t master_seed = 0;
  // Quadratic/cubic-cost stages run on deterministic subsamples.
  std::int64_t spectral_cap = 1000;
  std::int64_t hca_cap = 2000;
  std::int64_t silhouette_cap = 1000;

  void validate() const;
  std::size_t total_cells() const;
};

/// n log-spaced values from lo to hi inclusive.
std::vector<double> geomspace(double lo, double hi, int n);

/// Canonical short decimal rendering used for hyperparameter values.
std::string format_hyper_value(double v);

/// The stock experiment grid:
///   K-means   init {k-means++, random} x reassignment_ratio geomspace(1e-4, 0.5, 8)
///             metrics [aic, bic, inertia, silhouette]
///   GMM       covariance_type {diag, tied, spherical} x reg_covar geomspace(1e-8, 1e-2, 6)
///             metrics [aic, bic, inertia, silhouette]
///   HCA       method {centroid, median, single, ward}, metric euclidean
///             metrics [elbow, inertia, silhouette, max_diff]
///   Spectral  kernels {laplacian, rbf, sigmoid} x gamma {0.1, 1, 10}, plus
///             precomputed x metric {cosine, l2, l1} x n_neighbors {5, 20, 100}
///             metrics [inertia, silhouette]
GridSpec default_grid(std::uint64_t master_seed = 0);

// Adapters from a named-value selection to the typed fit configs.
KMeansConfig kmeans_config_from(const HyperSelection& hyper);
GMMConfig gmm_config_from(const HyperSelection& hyper);
HCAConfig hca_config_from(const HyperSelection& hyper);
SpectralConfig spectral_config_from(const HyperSelection& hyper);

}  // namespace kvote

#endif  // KVOTE_GRID_HPP
