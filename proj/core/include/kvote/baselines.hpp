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

#ifndef KVOTE_BASELINES_HPP
#define KVOTE_BASELINES_HPP

#include <cstdint>

#include "kvote/dataset.hpp"
#include "kvote/ensemble.hpp"

namespace kvote {

/// Exact expectation (in percent) of uniformly sampling one
/// (algorithm, hyper, metric) combination: the mean of all per-combination
/// accuracies.
double expected_value_baseline(const std::vector<ResultTable>& tables, int true_k);

/// Resampling-consensus baseline configuration. The clustering backend is
/// one algorithm with one hyperparameter selection (k-means or GMM).
struct ConsensusConfig {
  Algorithm algorithm = Algorithm::KMeans;
  HyperSelection hyper;
  int k_min = 2;
  int k_max = 10;
  int n_resamples = 50;
  double subsample_fraction = 0.8;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Consensus matrix for one candidate K: entry (i, j) is the fraction of
/// co-sampled resamples in which i and j landed in the same cluster
/// (0/0 -> 0). Symmetric, entries in [0, 1].
Matrix consensus_matrix(const Dataset& data, const ConsensusConfig& config, int K);

/// Monti-style choice of K: build the consensus matrix per K, take the area
/// under the empirical CDF of its upper-triangle values, and pick the K with
/// the largest relative area increase (delta(2) = A(2)). Ties go to the
/// smallest K.
int consensus_cluster_count(const Dataset& data, const ConsensusConfig& config);

}  // namespace kvote

#endif  // KVOTE_BASELINES_HPP
