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

#include "kvote/selection.hpp"

#include <algorithm>

#include "kvote/error.hpp"

namespace kvote {

namespace {

// Stable sort by descending score (canonical order preserved within ties),
// then dense ranks with equal scores sharing a rank.
void assign_ranks(std::vector<ComboScore>& combos) {
  std::stable_sort(combos.begin(), combos.end(),
                   [](const ComboScore& a, const ComboScore& b) { return a.score > b.score; });
  int rank = 0;
  double prev_score = 2.0;  // above any valid score
  for (auto& c : combos) {
    if (c.score != prev_score) {
      ++rank;
      prev_score = c.score;
    }
    c.rank = rank;
  }
}

}  // namespace

std::vector<ComboScore> rank_by_accuracy(const std::vector<ResultTable>& tables, int global_k) {
  if (tables.empty()) throw ValidationError("rank_by_accuracy: no tables");
  const std::vector<double> acc = combination_accuracies(tables, global_k);
  const ResultTable& ref = tables.front();

  std::vector<ComboScore> combos;
  combos.reserve(ref.cells.size());
  for (std::size_t c = 0; c < ref.cells.size(); ++c) {
    ComboScore cs;
    cs.algorithm = ref.cells[c].algorithm;
    cs.hyper_index = ref.cells[c].hyper_index;
    cs.metric_index = ref.cells[c].metric_index;
    cs.score = acc[c];
    combos.push_back(cs);
  }
  assign_ranks(combos);
  return combos;
}

std::vector<ComboScore> rank_by_stability(const ResultTable& table, int voted_k) {
  std::vector<ComboScore> combos;
  for (std::size_t j = 0; j < table.grid.algorithms.size(); ++j) {
    const auto& ag = table.grid.algorithms[j];
    for (std::size_t h = 0; h < ag.hypers.size(); ++h) {
      int agree = 0;
      int total = 0;
      for (const auto& cell : table.cells) {
        if (cell.algorithm != ag.algorithm || cell.hyper_index != static_cast<int>(h)) continue;
        ++total;
        if (cell.ok && cell.guessed_k == voted_k) ++agree;
      }
      ComboScore cs;
      cs.algorithm = ag.algorithm;
      cs.hyper_index = static_cast<int>(h);
      cs.score = total > 0 ? static_cast<double>(agree) / total : 0.0;
      combos.push_back(cs);
    }
  }
  assign_ranks(combos);
  return combos;
}

}  // namespace kvote
