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

#ifndef KVOTE_METRICS_HPP
#define KVOTE_METRICS_HPP

#include <cstdint>

#include "kvote/dataset.hpp"
#include "kvote/elbow.hpp"
#include "kvote/gmm.hpp"
#include "kvote/grid.hpp"
#include "kvote/hca.hpp"
#include "kvote/labeling.hpp"

namespace kvote {

/// Sum of squared distances from each point to the centroid of its assigned
/// cluster, with centroids computed from the labeling itself. This makes
/// inertia a labeling-level metric, uniform across algorithms.
double inertia(const Dataset& data, const Labeling& labeling);

/// Mean silhouette coefficient (b - a) / max(a, b); a excludes the point
/// itself, points in singleton clusters score 0. Above `cap` points the
/// score is computed on a label-stratified subsample of size cap (every
/// cluster keeps at least one point). Requires at least 2 clusters.
double silhouette(const Dataset& data, const Labeling& labeling, std::int64_t cap,
                  std::uint64_t seed);

enum class Criterion { Aic, Bic };

/// Free parameter counts entering AIC/BIC.
int free_parameters(CovarianceType type, int k, int d);
int free_parameters_kmeans(int k, int d);

/// AIC = 2p - 2 lnL; BIC = p ln(n) - 2 lnL, for a fitted mixture.
double information_criterion(Criterion kind, const GMMResult& model, std::int64_t n, int d);

/// The k-means analogue: classification likelihood of a spherical Gaussian
/// mixture with one pooled variance MLE across clusters, computed from the
/// labeling's own centroids.
struct SphericalLikelihood {
  double log_likelihood = 0.0;
  int k = 0;
};
SphericalLikelihood kmeans_log_likelihood(const Dataset& data, const Labeling& labeling);
double information_criterion(Criterion kind, const SphericalLikelihood& model, std::int64_t n, int d);

/// One fit per k over [k_min, k_max] (HCA reuses a single dendrogram),
/// metric evaluated on each fit. Fit seeds derive from the base seed and k,
/// so curves for different metrics over the same (algorithm, hyper) share
/// clusterings.
MetricCurve metric_curve(const Dataset& data, Algorithm algorithm, const HyperSelection& hyper,
                         MetricId metric, int k_min, int k_max, std::uint64_t seed,
                         std::int64_t silhouette_cap = 1000);

/// Result of reading one metric over one (algorithm, hyper) pair: the curve,
/// and the cluster count its elbow (or direct estimator) points at.
struct MetricOutcome {
  MetricId metric = MetricId::Inertia;
  MetricCurve curve;
  int guessed_k = 0;
  bool ok = false;
  std::string error;
};

/// Evaluates several metrics over a single (algorithm, hyper) pair while
/// computing each per-k fit exactly once. Fit seeds depend only on
/// (cell_seed, k), never on the metric list, so a one-metric call sees the
/// same clusterings as an all-metrics call. A fit failure fails every
/// metric; a metric failure is contained to its own outcome.
std::vector<MetricOutcome> evaluate_hyper(const Dataset& data, Algorithm algorithm,
                                          const HyperSelection& hyper,
                                          const std::vector<MetricId>& metrics, int k_min,
                                          int k_max, std::uint64_t cell_seed,
                                          std::int64_t silhouette_cap);

enum class DendrogramEstimator { MaxDiff, Elbow };

/// Direct cluster-count estimators on the dendrogram's merge heights.
/// Let h_m be the height of the merge that reduces the partition to m
/// clusters. max_diff picks argmax over m in [k_min, k_max] of
/// h_{m-1} - h_m (the largest top-down jump); elbow applies the triangle
/// method to the curve (m, h_m). Ties resolve to the smallest count.
int estimate_k_from_dendrogram(const Dendrogram& dendrogram, DendrogramEstimator method,
                               int k_min, int k_max);

}  // namespace kvote

#endif  // KVOTE_METRICS_HPP
