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

#include "kvote/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "kvote/error.hpp"
#include "kvote/gmm.hpp"
#include "kvote/kmeans.hpp"
#include "kvote/rng.hpp"

namespace kvote {

double expected_value_baseline(const std::vector<ResultTable>& tables, int true_k) {
  const std::vector<double> acc = combination_accuracies(tables, true_k);
  double mean = 0.0;
  for (double a : acc) mean += a;
  return 100.0 * mean / static_cast<double>(acc.size());
}

void ConsensusConfig::validate() const {
  if (algorithm != Algorithm::KMeans && algorithm != Algorithm::Gmm)
    throw ValidationError("ConsensusConfig: backend must be kmeans or gmm");
  if (n_resamples < 2) throw ValidationError("ConsensusConfig.n_resamples: must be >= 2");
  if (!(subsample_fraction > 0.0 && subsample_fraction < 1.0))
    throw ValidationError("ConsensusConfig.subsample_fraction: must be in (0, 1)");
  if (k_min < 2 || k_max < k_min) throw ValidationError("ConsensusConfig: invalid k range");
}

namespace {

// Upper-triangle co-sampling / co-clustering counts for one candidate K.
struct TriCounts {
  std::vector<std::uint16_t> sampled;    // times pair (i, j) co-sampled
  std::vector<std::uint16_t> clustered;  // times co-clustered when co-sampled
  std::vector<std::uint16_t> self;       // times point i sampled at all
  Eigen::Index n = 0;
  std::vector<std::size_t> tri_base;

  std::size_t index(Eigen::Index i, Eigen::Index j) const {  // requires i < j
    return tri_base[static_cast<std::size_t>(i)] + static_cast<std::size_t>(j - i - 1);
  }
};

TriCounts resample_counts(const Dataset& data, const ConsensusConfig& cfg, int K) {
  const Eigen::Index n = data.n();
  const auto m = static_cast<std::int64_t>(std::floor(cfg.subsample_fraction * static_cast<double>(n)));
  if (K > m)
    throw ValidationError("consensus: K exceeds resample size n * fraction");

  TriCounts tc;
  tc.n = n;
  tc.tri_base.resize(static_cast<std::size_t>(n));
  std::size_t offset = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    tc.tri_base[static_cast<std::size_t>(i)] = offset;
    offset += static_cast<std::size_t>(n - i - 1);
  }
  tc.sampled.assign(offset, 0);
  tc.clustered.assign(offset, 0);
  tc.self.assign(static_cast<std::size_t>(n), 0);

  int completed = 0;
  for (int r = 0; r < cfg.n_resamples; ++r) {
    const std::uint64_t rs =
        derive_seed({cfg.seed, static_cast<std::uint64_t>(K), static_cast<std::uint64_t>(r)});
    Rng rng(rs);
    auto rows = sample_without_replacement(n, m, rng);

    Dataset sub;
    sub.id = data.id;
    sub.points.resize(m, data.dim());
    for (std::int64_t i = 0; i < m; ++i)
      sub.points.row(i) = data.points.row(rows[static_cast<std::size_t>(i)]);

    Labeling labeling;
    try {
      if (cfg.algorithm == Algorithm::KMeans) {
        labeling = fit_kmeans(sub, K, kmeans_config_from(cfg.hyper), derive_seed({rs, 0x666954ULL})).labeling;
      } else {
        labeling = fit_gmm(sub, K, gmm_config_from(cfg.hyper), derive_seed({rs, 0x666954ULL})).labeling;
      }
    } catch (const std::exception&) {
      continue;  // a failed resample is skipped, not fatal
    }
    ++completed;

    // rows ascend, so every inner index j - i - 1 lands in row i's segment.
    for (std::int64_t a = 0; a < m; ++a) {
      const auto i = rows[static_cast<std::size_t>(a)];
      ++tc.self[static_cast<std::size_t>(i)];
      auto* seg = tc.sampled.data() + tc.tri_base[static_cast<std::size_t>(i)];
      for (std::int64_t b = a + 1; b < m; ++b) ++seg[rows[static_cast<std::size_t>(b)] - i - 1];
    }
    std::vector<std::vector<std::int64_t>> groups(static_cast<std::size_t>(labeling.k));
    for (std::int64_t a = 0; a < m; ++a)
      groups[static_cast<std::size_t>(labeling.assignments[static_cast<std::size_t>(a)])].push_back(
          rows[static_cast<std::size_t>(a)]);
    for (const auto& g : groups) {
      for (std::size_t a = 0; a < g.size(); ++a) {
        const auto i = g[a];
        auto* seg = tc.clustered.data() + tc.tri_base[static_cast<std::size_t>(i)];
        for (std::size_t b = a + 1; b < g.size(); ++b) ++seg[g[b] - i - 1];
      }
    }
  }
  if (completed == 0)
    throw RuntimeFailure("consensus: every resample failed for K=" + std::to_string(K));
  return tc;
}

// Area under the empirical CDF of the upper-triangle consensus values,
// trapezoid rule over 100 evenly spaced thresholds.
double cdf_area(const TriCounts& tc) {
  constexpr int kThresholds = 100;
  std::vector<std::size_t> hist(kThresholds, 0);
  const std::size_t total = tc.sampled.size();
  for (std::size_t p = 0; p < total; ++p) {
    double v = 0.0;
    if (tc.sampled[p] > 0) v = static_cast<double>(tc.clustered[p]) / tc.sampled[p];
    auto bucket = static_cast<int>(std::ceil(v * (kThresholds - 1) - 1e-9));
    bucket = std::clamp(bucket, 0, kThresholds - 1);
    ++hist[static_cast<std::size_t>(bucket)];
  }
  double area = 0.0;
  std::size_t cum = hist[0];
  double prev_cdf = static_cast<double>(cum) / static_cast<double>(total);
  const double dt = 1.0 / (kThresholds - 1);
  for (int t = 1; t < kThresholds; ++t) {
    cum += hist[static_cast<std::size_t>(t)];
    const double cdf = static_cast<double>(cum) / static_cast<double>(total);
    area += 0.5 * (prev_cdf + cdf) * dt;
    prev_cdf = cdf;
  }
  return area;
}

}  // namespace

Matrix consensus_matrix(const Dataset& data, const ConsensusConfig& config, int K) {
  config.validate();
  if (K < 2) throw ValidationError("consensus_matrix: K must be >= 2");
  const TriCounts tc = resample_counts(data, config, K);

  const Eigen::Index n = data.n();
  Matrix M = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (tc.self[static_cast<std::size_t>(i)] > 0) M(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const std::size_t p = tc.index(i, j);
      if (tc.sampled[p] > 0) {
        const double v = static_cast<double>(tc.clustered[p]) / tc.sampled[p];
        M(i, j) = v;
        M(j, i) = v;
      }
    }
  }
  return M;
}

int consensus_cluster_count(const Dataset& data, const ConsensusConfig& config) {
  config.validate();
  double prev_area = 0.0;
  double best_delta = -1.0;
  int best_k = config.k_min;
  for (int K = config.k_min; K <= config.k_max; ++K) {
    const double area = cdf_area(resample_counts(data, config, K));
    const double delta =
        K == config.k_min ? area : std::max(0.0, area - prev_area) / prev_area;
    if (delta > best_delta) {
      best_delta = delta;
      best_k = K;
    }
    prev_area = area;
  }
  return best_k;
}

}  // namespace kvote
