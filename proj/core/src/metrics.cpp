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

#include "kvote/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kvote/error.hpp"
#include "kvote/rng.hpp"
#include "kvote/spectral.hpp"

namespace kvote {

double inertia(const Dataset& data, const Labeling& labeling) {
  const Eigen::Index n = data.n();
  if (static_cast<Eigen::Index>(labeling.assignments.size()) != n)
    throw ValidationError("inertia: labeling does not match dataset");
  Matrix centroids = Matrix::Zero(labeling.k, data.dim());
  std::vector<double> counts(static_cast<std::size_t>(labeling.k), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = labeling.assignments[static_cast<std::size_t>(i)];
    centroids.row(c) += data.points.row(i);
    counts[static_cast<std::size_t>(c)] += 1.0;
  }
  for (int c = 0; c < labeling.k; ++c) centroids.row(c) /= counts[static_cast<std::size_t>(c)];
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    total += (data.points.row(i) - centroids.row(labeling.assignments[static_cast<std::size_t>(i)]))
                 .squaredNorm();
  return total;
}

namespace {

// Label-stratified subsample of size cap: proportional allocation by
// largest remainder, every cluster keeping at least one point.
std::vector<std::int64_t> stratified_rows(const Labeling& labeling, std::int64_t cap, Rng& rng) {
  const auto sizes = labeling.cluster_sizes();
  const int L = labeling.k;
  const auto n = static_cast<std::int64_t>(labeling.assignments.size());

  std::vector<std::int64_t> target(static_cast<std::size_t>(L));
  std::vector<double> remainder(static_cast<std::size_t>(L));
  std::int64_t total = 0;
  for (int l = 0; l < L; ++l) {
    const double quota = static_cast<double>(cap) * sizes[static_cast<std::size_t>(l)] / static_cast<double>(n);
    auto t = static_cast<std::int64_t>(std::floor(quota));
    t = std::max<std::int64_t>(t, 1);
    t = std::min<std::int64_t>(t, sizes[static_cast<std::size_t>(l)]);
    target[static_cast<std::size_t>(l)] = t;
    remainder[static_cast<std::size_t>(l)] = quota - std::floor(quota);
    total += t;
  }
  while (total < cap) {
    int best = -1;
    for (int l = 0; l < L; ++l) {
      if (target[static_cast<std::size_t>(l)] >= sizes[static_cast<std::size_t>(l)]) continue;
      if (best < 0 || remainder[static_cast<std::size_t>(l)] > remainder[static_cast<std::size_t>(best)]) best = l;
    }
    if (best < 0) break;
    ++target[static_cast<std::size_t>(best)];
    remainder[static_cast<std::size_t>(best)] -= 1.0;
    ++total;
  }
  while (total > cap) {
    int worst = -1;
    for (int l = 0; l < L; ++l) {
      if (target[static_cast<std::size_t>(l)] <= 1) continue;
      if (worst < 0 || remainder[static_cast<std::size_t>(l)] < remainder[static_cast<std::size_t>(worst)]) worst = l;
    }
    if (worst < 0) break;
    --target[static_cast<std::size_t>(worst)];
    remainder[static_cast<std::size_t>(worst)] += 1.0;
    --total;
  }

  std::vector<std::vector<std::int64_t>> by_label(static_cast<std::size_t>(L));
  for (std::int64_t i = 0; i < n; ++i)
    by_label[static_cast<std::size_t>(labeling.assignments[static_cast<std::size_t>(i)])].push_back(i);

  std::vector<std::int64_t> rows;
  rows.reserve(static_cast<std::size_t>(cap));
  for (int l = 0; l < L; ++l) {
    const auto& pool = by_label[static_cast<std::size_t>(l)];
    auto picks = sample_without_replacement(static_cast<std::int64_t>(pool.size()),
                                            target[static_cast<std::size_t>(l)], rng);
    for (auto p : picks) rows.push_back(pool[static_cast<std::size_t>(p)]);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

double silhouette_direct(const Matrix& X, const Labeling& labeling) {
  const Eigen::Index n = X.rows();
  const int k = labeling.k;
  const auto sizes = labeling.cluster_sizes();

  double total = 0.0;
  std::vector<double> dist_sum(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dist_sum[static_cast<std::size_t>(labeling.assignments[static_cast<std::size_t>(j)])] +=
          (X.row(i) - X.row(j)).norm();
    }
    const int own = labeling.assignments[static_cast<std::size_t>(i)];
    const int own_size = sizes[static_cast<std::size_t>(own)];
    if (own_size <= 1) continue;  // singleton scores 0
    const double a = dist_sum[static_cast<std::size_t>(own)] / (own_size - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      b = std::min(b, dist_sum[static_cast<std::size_t>(c)] / sizes[static_cast<std::size_t>(c)]);
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

}  // namespace

double silhouette(const Dataset& data, const Labeling& labeling, std::int64_t cap,
                  std::uint64_t seed) {
  if (static_cast<Eigen::Index>(labeling.assignments.size()) != data.n())
    throw ValidationError("silhouette: labeling does not match dataset");
  if (cap < 1) throw ValidationError("silhouette: cap must be >= 1");
  if (labeling.k < 2) throw ValidationError("silhouette: undefined for fewer than 2 clusters");

  const Matrix* X = &data.points;
  const Labeling* lab = &labeling;
  Matrix sub_points;
  Labeling sub_labeling;
  if (data.n() > cap) {
    Rng rng(seed);
    std::vector<std::int64_t> rows;
    if (labeling.k <= cap) {
      rows = stratified_rows(labeling, cap, rng);
    } else {
      rows = sample_without_replacement(data.n(), cap, rng);
    }
    sub_points.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
    std::vector<int> sub_assign(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      sub_points.row(static_cast<Eigen::Index>(i)) = data.points.row(rows[i]);
      sub_assign[i] = labeling.assignments[static_cast<std::size_t>(rows[i])];
    }
    sub_labeling = Labeling::from_assignments(std::move(sub_assign));
    X = &sub_points;
    lab = &sub_labeling;
    if (lab->k < 2) throw ValidationError("silhouette: fewer than 2 clusters after subsampling");
  }
  if (lab->k >= X->rows())
    throw ValidationError("silhouette: needs at least one non-singleton cluster");
  return silhouette_direct(*X, *lab);
}

int free_parameters(CovarianceType type, int k, int d) {
  const int means = k * d;
  const int weights = k - 1;
  switch (type) {
    case CovarianceType::Diag: return means + k * d + weights;
    case CovarianceType::Tied: return means + d * (d + 1) / 2 + weights;
    case CovarianceType::Spherical: return means + k + weights;
  }
  return 0;
}

int free_parameters_kmeans(int k, int d) { return k * d + 1 + (k - 1); }

namespace {

double criterion_value(Criterion kind, int p, double log_likelihood, std::int64_t n) {
  if (!std::isfinite(log_likelihood))
    throw RuntimeFailure("information_criterion: log-likelihood unavailable");
  if (kind == Criterion::Aic) return 2.0 * p - 2.0 * log_likelihood;
  return p * std::log(static_cast<double>(n)) - 2.0 * log_likelihood;
}

}  // namespace

double information_criterion(Criterion kind, const GMMResult& model, std::int64_t n, int d) {
  const int k = static_cast<int>(model.weights.size());
  return criterion_value(kind, free_parameters(model.covariance_type, k, d), model.log_likelihood, n);
}

SphericalLikelihood kmeans_log_likelihood(const Dataset& data, const Labeling& labeling) {
  const auto n = static_cast<std::int64_t>(data.n());
  const int d = static_cast<int>(data.dim());
  const int k = labeling.k;
  if (n <= k)
    throw RuntimeFailure("kmeans_log_likelihood: pooled variance undefined for n <= k");
  const double pooled = inertia(data, labeling) / (static_cast<double>(d) * (n - k));
  if (!(pooled > 0.0))
    throw RuntimeFailure("kmeans_log_likelihood: zero pooled variance");

  double ll = -static_cast<double>(n) * std::log(static_cast<double>(n));
  for (int size : labeling.cluster_sizes()) ll += size * std::log(static_cast<double>(size));
  ll -= 0.5 * n * d * std::log(2.0 * M_PI * pooled);
  ll -= 0.5 * d * (n - k);
  return {ll, k};
}

double information_criterion(Criterion kind, const SphericalLikelihood& model, std::int64_t n, int d) {
  return criterion_value(kind, free_parameters_kmeans(model.k, d), model.log_likelihood, n);
}

int estimate_k_from_dendrogram(const Dendrogram& dendrogram, DendrogramEstimator method,
                               int k_min, int k_max) {
  const int n = dendrogram.n;
  if (n < 3) throw ValidationError("estimate_k_from_dendrogram: needs at least 3 points");
  if (k_min < 2 || k_max < k_min || k_max > n - 1)
    throw ValidationError("estimate_k_from_dendrogram: k range outside [2, n-1]");

  if (method == DendrogramEstimator::MaxDiff) {
    int best_k = k_min;
    double best_gap = -std::numeric_limits<double>::infinity();
    for (int m = k_min; m <= k_max; ++m) {
      const double gap = dendrogram.height_at(m - 1) - dendrogram.height_at(m);
      if (gap > best_gap) {
        best_gap = gap;
        best_k = m;
      }
    }
    return best_k;
  }

  MetricCurve heights;
  heights.metric_name = "merge_height";
  for (int m = k_min; m <= k_max; ++m) {
    heights.k_values.push_back(m);
    heights.scores.push_back(dendrogram.height_at(m));
  }
  return find_elbow(heights, ElbowMethod::Triangle).k;
}

MetricCurve metric_curve(const Dataset& data, Algorithm algorithm, const HyperSelection& hyper,
                         MetricId metric, int k_min, int k_max, std::uint64_t seed,
                         std::int64_t silhouette_cap) {
  auto outcomes = evaluate_hyper(data, algorithm, hyper, {metric}, k_min, k_max, seed, silhouette_cap);
  if (!outcomes[0].ok && outcomes[0].curve.scores.empty())
    throw RuntimeFailure(outcomes[0].error);
  return outcomes[0].curve;
}

std::vector<MetricOutcome> evaluate_hyper(const Dataset& data, Algorithm algorithm,
                                          const HyperSelection& hyper,
                                          const std::vector<MetricId>& metrics, int k_min,
                                          int k_max, std::uint64_t cell_seed,
                                          std::int64_t silhouette_cap) {
  if (k_min < 2 || k_max < k_min)
    throw ValidationError("evaluate_hyper: invalid k range");
  if (k_max > data.n())
    throw ValidationError("evaluate_hyper: k_max exceeds dataset size");

  const auto n = static_cast<std::int64_t>(data.n());
  const int d = static_cast<int>(data.dim());
  const int n_k = k_max - k_min + 1;

  std::vector<MetricOutcome> outcomes;
  outcomes.reserve(metrics.size());
  for (MetricId m : metrics) {
    MetricOutcome o;
    o.metric = m;
    o.curve.metric_name = to_string(m);
    outcomes.push_back(std::move(o));
  }
  auto context = [&](MetricId m, int k) {
    return "(" + to_string(algorithm) + ", " + hyper.display() + ", " + to_string(m) + ", k=" +
           std::to_string(k) + ")";
  };
  auto fail_all = [&](const std::string& why) {
    for (auto& o : outcomes)
      if (o.error.empty()) o.error = why;
  };

  // One set of fits per k, shared across all metrics of this hyper.
  std::vector<Labeling> labelings(static_cast<std::size_t>(n_k));
  std::vector<GMMResult> gmm_models;
  Dendrogram dendrogram;

  const bool wants_ic = std::any_of(metrics.begin(), metrics.end(), [](MetricId m) {
    return m == MetricId::Aic || m == MetricId::Bic;
  });

  try {
    switch (algorithm) {
      case Algorithm::KMeans: {
        KMeansConfig cfg = kmeans_config_from(hyper);
        for (int k = k_min; k <= k_max; ++k)
          labelings[static_cast<std::size_t>(k - k_min)] =
              fit_kmeans(data, k, cfg, derive_seed({cell_seed, static_cast<std::uint64_t>(k)})).labeling;
        break;
      }
      case Algorithm::Gmm: {
        GMMConfig cfg = gmm_config_from(hyper);
        if (wants_ic) gmm_models.resize(static_cast<std::size_t>(n_k));
        for (int k = k_min; k <= k_max; ++k) {
          GMMResult fit = fit_gmm(data, k, cfg, derive_seed({cell_seed, static_cast<std::uint64_t>(k)}));
          labelings[static_cast<std::size_t>(k - k_min)] = fit.labeling;
          if (wants_ic) gmm_models[static_cast<std::size_t>(k - k_min)] = std::move(fit);
        }
        break;
      }
      case Algorithm::Hca: {
        dendrogram = fit_hca(data, hca_config_from(hyper));
        for (int k = k_min; k <= k_max; ++k)
          labelings[static_cast<std::size_t>(k - k_min)] = cut_dendrogram(dendrogram, k);
        break;
      }
      case Algorithm::Spectral: {
        SpectralConfig cfg = spectral_config_from(hyper);
        Matrix W = build_affinity(data, cfg);
        SpectralBasis basis = laplacian_eigenbasis(W);
        for (int k = k_min; k <= k_max; ++k)
          labelings[static_cast<std::size_t>(k - k_min)] =
              cluster_embedding(basis, k, derive_seed({cell_seed, static_cast<std::uint64_t>(k)}));
        break;
      }
    }
  } catch (const std::exception& e) {
    fail_all("fit failed " + context(metrics[0], 0) + ": " + e.what());
    return outcomes;
  }

  for (auto& outcome : outcomes) {
    const MetricId metric = outcome.metric;

    // HCA's direct estimators read the dendrogram, not an elbow curve; the
    // merge-height curve is still recorded for downstream analysis.
    if (metric == MetricId::Elbow || metric == MetricId::MaxDiff) {
      if (algorithm != Algorithm::Hca) {
        outcome.error = "metric " + to_string(metric) + " only applies to hca";
        continue;
      }
      try {
        for (int m = k_min; m <= k_max; ++m) {
          outcome.curve.k_values.push_back(m);
          outcome.curve.scores.push_back(dendrogram.height_at(m));
        }
        outcome.guessed_k = estimate_k_from_dendrogram(
            dendrogram,
            metric == MetricId::MaxDiff ? DendrogramEstimator::MaxDiff : DendrogramEstimator::Elbow,
            k_min, k_max);
        outcome.ok = true;
      } catch (const std::exception& e) {
        outcome.error = std::string("estimator failed ") + context(metric, 0) + ": " + e.what();
      }
      continue;
    }

    try {
      for (int k = k_min; k <= k_max; ++k) {
        const Labeling& lab = labelings[static_cast<std::size_t>(k - k_min)];
        double score = 0.0;
        switch (metric) {
          case MetricId::Inertia:
            score = inertia(data, lab);
            break;
          case MetricId::Silhouette:
            score = silhouette(data, lab, silhouette_cap,
                               derive_seed({cell_seed, static_cast<std::uint64_t>(k), 0x73696cULL}));
            break;
          case MetricId::Aic:
          case MetricId::Bic: {
            const Criterion kind = metric == MetricId::Aic ? Criterion::Aic : Criterion::Bic;
            if (algorithm == Algorithm::Gmm) {
              score = information_criterion(kind, gmm_models[static_cast<std::size_t>(k - k_min)], n, d);
            } else if (algorithm == Algorithm::KMeans) {
              score = information_criterion(kind, kmeans_log_likelihood(data, lab), n, d);
            } else {
              throw ValidationError("aic/bic only apply to kmeans and gmm");
            }
            break;
          }
          default:
            break;
        }
        if (!std::isfinite(score))
          throw RuntimeFailure("non-finite metric value");
        outcome.curve.k_values.push_back(k);
        outcome.curve.scores.push_back(score);
      }
      outcome.guessed_k = find_elbow(outcome.curve, ElbowMethod::Triangle).k;
      outcome.ok = true;
    } catch (const std::exception& e) {
      const int at_k = k_min + static_cast<int>(outcome.curve.k_values.size());
      outcome.curve.k_values.clear();
      outcome.curve.scores.clear();
      outcome.error = "metric failed " + context(metric, at_k) + ": " + e.what();
    }
  }
  return outcomes;
}

}  // namespace kvote
