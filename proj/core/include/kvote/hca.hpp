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

#ifndef KVOTE_HCA_HPP
#define KVOTE_HCA_HPP

#include <vector>

#include "kvote/dataset.hpp"
#include "kvote/labeling.hpp"

namespace kvote {

enum class Linkage { Centroid, Median, Single, Ward };

struct HCAConfig {
  Linkage method = Linkage::Ward;
  // Euclidean is the only supported metric; the geometric linkages
  // (centroid, median, ward) are only defined for it.
};

/// Agglomerative merge sequence. Node ids reference original points [0, n)
/// or prior merges [n, 2n-1): merge t creates node n + t. Heights are
/// Euclidean-scale (square roots of the Lance-Williams recurrence values)
/// and may contain inversions under centroid or median linkage.
struct Dendrogram {
  struct Merge {
    int left = 0;
    int right = 0;
    double height = 0.0;
    int new_size = 0;
  };
  std::vector<Merge> merges;  // length n - 1, in merge order
  int n = 0;

  /// Checks structural invariants; throws RuntimeFailure on violation.
  void validate() const;

  /// Height of the merge that reduces the partition to m clusters,
  /// m in [1, n-1].
  double height_at(int m) const;
};

/// Pairwise agglomeration under the configured linkage, computed with the
/// Lance-Williams recurrence on squared Euclidean distances. Equal minimum
/// distances are broken by the smallest (i, j) pair of cluster ids, so the
/// result is fully deterministic.
Dendrogram fit_hca(const Dataset& data, const HCAConfig& config);

/// Undo the last k-1 merges; connected groups become clusters, with ids
/// ordered by each cluster's smallest contained point index.
Labeling cut_dendrogram(const Dendrogram& dendrogram, int k);

}  // namespace kvote

#endif  // KVOTE_HCA_HPP
