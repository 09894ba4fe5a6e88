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

#ifndef KVOTE_LABELING_HPP
#define KVOTE_LABELING_HPP

#include <vector>

namespace kvote {

/// A cluster assignment over n points. Invariant: every assignment is in
/// [0, k) and every id in [0, k) appears at least once — a labeling never
/// carries empty clusters. Fitters that can strand a center compact their
/// raw assignments through from_assignments().
struct Labeling {
  std::vector<int> assignments;
  int k = 0;

  /// Renumbers arbitrary non-negative ids densely to [0, k) in order of
  /// first appearance and records k.
  static Labeling from_assignments(std::vector<int> raw) {
    Labeling out;
    std::vector<int> remap;
    out.assignments.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto id = static_cast<std::size_t>(raw[i]);
      if (id >= remap.size()) remap.resize(id + 1, -1);
      if (remap[id] < 0) remap[id] = out.k++;
      out.assignments[i] = remap[id];
    }
    return out;
  }

  std::vector<int> cluster_sizes() const {
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
    return sizes;
  }
};

}  // namespace kvote

#endif  // KVOTE_LABELING_HPP
