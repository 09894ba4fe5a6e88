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

#ifndef KVOTE_KMEANS_HPP
#define KVOTE_KMEANS_HPP

#include <cstdint>

#include "kvote/dataset.hpp"
#include "kvote/labeling.hpp"

namespace kvote {

enum class KMeansInit { KMeansPlusPlus, Random };

struct KMeansConfig {
  KMeansInit init = KMeansInit::KMeansPlusPlus;
  double reassignment_ratio = 0.01;  // in (0, 1]
  std::int64_t batch_size = 1024;
  int n_init = 3;
  int max_iter = 100;
  double tol = 1e-4;

  void validate() const;
};

struct KMeansResult {
  Labeling labeling;
  Matrix centers;  // k x d
  double inertia = 0.0;  // full-data sum of squared distances to centers
};

/// Mini-batch k-means. Each iteration assigns one random batch to the
/// nearest centers and moves every touched center with per-center learning
/// rate 1/count (so a center tracks the running mean of all points ever
/// assigned to it). Centers whose cumulative assignment share drops below
/// reassignment_ratio times the largest share are re-seeded to random data
/// points. When batch_size >= n the batch is the whole dataset and the
/// procedure becomes a deterministic full-data pass. Best of n_init restarts
/// by full-data inertia; a restart never beats its own initialization's
/// inertia downward — whichever of {init, final} centers score better is
/// kept. Deterministic in seed.
KMeansResult fit_kmeans(const Dataset& data, int k, const KMeansConfig& config, std::uint64_t seed);

}  // namespace kvote

#endif  // KVOTE_KMEANS_HPP
