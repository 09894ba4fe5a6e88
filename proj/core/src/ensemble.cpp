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

#include "kvote/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "kvote/error.hpp"
#include "kvote/parallel.hpp"
#include "kvote/rng.hpp"

namespace kvote {

std::size_t ResultTable::failed_cells() const {
  std::size_t failed = 0;
  for (const auto& c : cells)
    if (!c.ok) ++failed;
  return failed;
}

ResultTable evaluate_grid(const Dataset& data, const GridSpec& grid, int workers) {
  grid.validate();

  // Per-algorithm working data, honoring the subsample caps.
  std::vector<Dataset> algo_data;
  algo_data.reserve(grid.algorithms.size());
  for (std::size_t j = 0; j < grid.algorithms.size(); ++j) {
    const Algorithm a = grid.algorithms[j].algorithm;
    std::int64_t cap = -1;
    if (a == Algorithm::Spectral) cap = grid.spectral_cap;
    if (a == Algorithm::Hca) cap = grid.hca_cap;
    if (cap > 0) {
      algo_data.push_back(subsample(
          data, cap, derive_seed({grid.master_seed, 0x636170ULL, static_cast<std::uint64_t>(j)})));
    } else {
      algo_data.push_back(data);
    }
    if (grid.k_max > algo_data.back().n())
      throw ValidationError("evaluate_grid: k_max exceeds " + to_string(a) +
                            " data size after subsampling");
  }

  struct Task {
    std::size_t j;
    std::size_t h;
  };
  std::vector<Task> tasks;
  for (std::size_t j = 0; j < grid.algorithms.size(); ++j)
    for (std::size_t h = 0; h < grid.algorithms[j].hypers.size(); ++h) tasks.push_back({j, h});

  std::vector<std::vector<MetricOutcome>> outcomes(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const auto [j, h] = tasks[t];
    const auto& ag = grid.algorithms[j];
    const std::uint64_t cell_seed =
        derive_seed({grid.master_seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(h)});
    outcomes[t] = evaluate_hyper(algo_data[j], ag.algorithm, ag.hypers[h], ag.metrics, grid.k_min,
                                 grid.k_max, cell_seed, grid.silhouette_cap);
  });

  ResultTable table;
  table.dataset_id = data.id;
  table.grid = grid;
  table.cells.reserve(grid.total_cells());
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto [j, h] = tasks[t];
    const auto& ag = grid.algorithms[j];
    for (std::size_t m = 0; m < ag.metrics.size(); ++m) {
      const MetricOutcome& o = outcomes[t][m];
      CellResult cell;
      cell.algorithm = ag.algorithm;
      cell.hyper_index = static_cast<int>(h);
      cell.metric_index = static_cast<int>(m);
      cell.metric = ag.metrics[m];
      cell.guessed_k = o.guessed_k;
      cell.curve = o.curve;
      cell.ok = o.ok;
      cell.error = o.error;
      table.cells.push_back(std::move(cell));
    }
  }

  const std::size_t failed = table.failed_cells();
  if (failed * 2 > table.cells.size())
    throw RuntimeFailure("evaluate_grid: " + std::to_string(failed) + " of " +
                         std::to_string(table.cells.size()) + " cells failed");
  return table;
}

int smallest_mode(std::span<const int> values) {
  if (values.empty()) throw ValidationError("smallest_mode: empty input");
  std::map<int, std::size_t> counts;
  for (int v : values) ++counts[v];
  int best = 0;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {  // ascending keys: ties keep the smallest
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

EnsembleMatrix build_raw(const ResultTable& table) {
  EnsembleMatrix out;
  out.construction = EnsembleConstruction::Raw;
  for (const auto& ag : table.grid.algorithms) {
    EnsembleMatrix::Column col;
    col.algorithm = ag.algorithm;
    for (const auto& cell : table.cells)
      if (cell.algorithm == ag.algorithm && cell.ok) col.guesses.push_back(cell.guessed_k);
    if (col.guesses.empty())
      out.dropped.push_back(ag.algorithm);
    else
      out.columns.push_back(std::move(col));
  }
  return out;
}

EnsembleMatrix collapse_mode(const ResultTable& table) {
  EnsembleMatrix out;
  out.construction = EnsembleConstruction::Mode;
  for (const auto& ag : table.grid.algorithms) {
    EnsembleMatrix::Column col;
    col.algorithm = ag.algorithm;
    for (std::size_t h = 0; h < ag.hypers.size(); ++h) {
      std::vector<int> guesses;
      for (const auto& cell : table.cells)
        if (cell.algorithm == ag.algorithm && cell.hyper_index == static_cast<int>(h) && cell.ok)
          guesses.push_back(cell.guessed_k);
      if (!guesses.empty()) col.guesses.push_back(smallest_mode(guesses));
    }
    if (col.guesses.empty())
      out.dropped.push_back(ag.algorithm);
    else
      out.columns.push_back(std::move(col));
  }
  return out;
}

EnsembleMatrix build_ensemble(const ResultTable& table, EnsembleConstruction construction) {
  return construction == EnsembleConstruction::Raw ? build_raw(table) : collapse_mode(table);
}

namespace {

void require_votable(const EnsembleMatrix& e) {
  if (e.columns.empty()) throw ValidationError("vote: ensemble has no columns");
  for (const auto& c : e.columns)
    if (c.guesses.empty()) throw ValidationError("vote: empty column");
}

// Distinct values with multiplicities, ascending by value.
std::vector<std::pair<int, std::uint64_t>> tally(const std::vector<int>& guesses) {
  std::map<int, std::uint64_t> counts;
  for (int g : guesses) ++counts[g];
  return {counts.begin(), counts.end()};
}

int argmax_smallest(const std::map<int, std::uint64_t>& weight_by_value) {
  int best = 0;
  std::uint64_t best_w = 0;
  for (const auto& [value, w] : weight_by_value) {
    if (w > best_w) {
      best = value;
      best_w = w;
    }
  }
  return best;
}

}  // namespace

int vote_full(const EnsembleMatrix& ensemble) {
  require_votable(ensemble);
  // count(v) = sum_j c_j(v) * prod_{l != j} |col_l|: each occurrence of v in
  // column j appears in every combination of the other columns.
  std::map<int, std::uint64_t> counts;
  const std::size_t n_cols = ensemble.columns.size();
  for (std::size_t j = 0; j < n_cols; ++j) {
    std::uint64_t others = 1;
    for (std::size_t l = 0; l < n_cols; ++l)
      if (l != j) others *= ensemble.columns[l].guesses.size();
    for (const auto& [value, mult] : tally(ensemble.columns[j].guesses))
      counts[value] += mult * others;
  }
  return argmax_smallest(counts);
}

int vote_column_first(const EnsembleMatrix& ensemble) {
  require_votable(ensemble);
  std::vector<int> modes;
  modes.reserve(ensemble.columns.size());
  for (const auto& col : ensemble.columns) modes.push_back(smallest_mode(col.guesses));
  return smallest_mode(modes);
}

int vote_row_first(const EnsembleMatrix& ensemble) {
  require_votable(ensemble);
  const std::size_t n_cols = ensemble.columns.size();
  std::vector<std::vector<std::pair<int, std::uint64_t>>> distinct(n_cols);
  for (std::size_t j = 0; j < n_cols; ++j) distinct[j] = tally(ensemble.columns[j].guesses);

  // Odometer over distinct-value combinations; each combination stands for
  // prod multiplicities identical rows of the cross product.
  std::vector<std::size_t> pos(n_cols, 0);
  std::vector<int> row(n_cols);
  std::map<int, std::uint64_t> weight_by_mode;
  while (true) {
    std::uint64_t weight = 1;
    for (std::size_t j = 0; j < n_cols; ++j) {
      row[j] = distinct[j][pos[j]].first;
      weight *= distinct[j][pos[j]].second;
    }
    weight_by_mode[smallest_mode(row)] += weight;

    std::size_t j = 0;
    while (j < n_cols && ++pos[j] == distinct[j].size()) {
      pos[j] = 0;
      ++j;
    }
    if (j == n_cols) break;
  }
  return argmax_smallest(weight_by_mode);
}

void RowMatrix::validate() const {
  if (rows.empty()) throw ValidationError("RowMatrix: no rows");
  for (const auto& r : rows)
    if (r.size() != rows.front().size() || r.empty())
      throw ValidationError("RowMatrix: ragged or empty row");
}

int vote_full(const RowMatrix& matrix) {
  matrix.validate();
  std::vector<int> flat;
  flat.reserve(matrix.rows.size() * matrix.rows.front().size());
  for (const auto& r : matrix.rows) flat.insert(flat.end(), r.begin(), r.end());
  return smallest_mode(flat);
}

int vote_column_first(const RowMatrix& matrix) {
  matrix.validate();
  const std::size_t width = matrix.rows.front().size();
  std::vector<int> modes;
  modes.reserve(width);
  std::vector<int> column(matrix.rows.size());
  for (std::size_t j = 0; j < width; ++j) {
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) column[i] = matrix.rows[i][j];
    modes.push_back(smallest_mode(column));
  }
  return smallest_mode(modes);
}

int vote_row_first(const RowMatrix& matrix) {
  matrix.validate();
  std::vector<int> row_modes;
  row_modes.reserve(matrix.rows.size());
  for (const auto& r : matrix.rows) row_modes.push_back(smallest_mode(r));
  return smallest_mode(row_modes);
}

namespace {

std::string grid_signature(const GridSpec& grid) {
  std::string sig = std::to_string(grid.k_min) + ":" + std::to_string(grid.k_max);
  for (const auto& ag : grid.algorithms) {
    sig += "|" + to_string(ag.algorithm) + "/" + std::to_string(ag.hypers.size()) + "/";
    for (MetricId m : ag.metrics) sig += to_string(m) + ",";
  }
  return sig;
}

}  // namespace

std::vector<double> combination_accuracies(const std::vector<ResultTable>& tables, int true_k) {
  if (tables.empty()) throw ValidationError("combination_accuracies: no tables");
  const std::string sig = grid_signature(tables.front().grid);
  const std::size_t n_cells = tables.front().cells.size();
  for (const auto& t : tables)
    if (grid_signature(t.grid) != sig || t.cells.size() != n_cells)
      throw ValidationError("combination_accuracies: tables use different grids");

  std::vector<double> acc(n_cells, 0.0);
  for (const auto& t : tables)
    for (std::size_t c = 0; c < n_cells; ++c)
      if (t.cells[c].ok && t.cells[c].guessed_k == true_k) acc[c] += 1.0;
  for (double& a : acc) a /= static_cast<double>(tables.size());
  return acc;
}

std::vector<AccuracyStatsRow> accuracy_stats(const std::vector<ResultTable>& tables, int true_k,
                                             StatsGrouping group_by) {
  const std::vector<double> acc = combination_accuracies(tables, true_k);
  const ResultTable& ref = tables.front();

  // Group keys follow canonical cell order, so output order is canonical.
  std::vector<std::pair<AccuracyStatsRow, std::vector<double>>> groups;
  auto group_for = [&](const CellResult& cell) -> std::vector<double>& {
    AccuracyStatsRow key;
    key.algorithm = cell.algorithm;
    if (group_by == StatsGrouping::AlgorithmMetric) key.metric = cell.metric;
    if (group_by == StatsGrouping::AlgorithmHyper) key.hyper_index = cell.hyper_index;
    for (auto& [row, values] : groups)
      if (row.algorithm == key.algorithm && row.metric == key.metric &&
          row.hyper_index == key.hyper_index)
        return values;
    groups.emplace_back(key, std::vector<double>{});
    return groups.back().second;
  };
  for (std::size_t c = 0; c < ref.cells.size(); ++c)
    group_for(ref.cells[c]).push_back(acc[c] * 100.0);

  std::vector<AccuracyStatsRow> rows;
  rows.reserve(groups.size());
  for (auto& [row, values] : groups) {
    row.readings = static_cast<int>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    row.mean = mean;
    row.stddev = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
    row.min = *std::min_element(values.begin(), values.end());
    row.max = *std::max_element(values.begin(), values.end());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace kvote
