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

#ifndef KVOTE_SELECTION_HPP
#define KVOTE_SELECTION_HPP

#include <optional>
#include <vector>

#include "kvote/ensemble.hpp"

namespace kvote {

/// A ranked algorithm-hyperparameter(-metric) combination. Ranks are dense
/// from 1; equal scores share a rank and keep canonical
/// (algorithm, hyper_index, metric_index) order.
struct ComboScore {
  Algorithm algorithm = Algorithm::KMeans;
  int hyper_index = 0;
  std::optional<int> metric_index;  // absent for stability ranking
  double score = 0.0;               // in [0, 1]
  int rank = 0;
};

/// Subset workflow: score each (algorithm, hyper, metric) combination by the
/// fraction of tables whose guess equals the globally voted cluster count.
std::vector<ComboScore> rank_by_accuracy(const std::vector<ResultTable>& tables, int global_k);

/// Full-dataset workflow: score each (algorithm, hyper) combination by the
/// fraction of its metrics agreeing with the voted cluster count. Ties are
/// expected; every top-ranked combination is an equally acceptable choice.
std::vector<ComboScore> rank_by_stability(const ResultTable& table, int voted_k);

}  // namespace kvote

#endif  // KVOTE_SELECTION_HPP
