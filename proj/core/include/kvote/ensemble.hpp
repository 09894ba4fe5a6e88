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

#ifndef KVOTE_ENSEMBLE_HPP
#define KVOTE_ENSEMBLE_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kvote/dataset.hpp"
#include "kvote/grid.hpp"
#include "kvote/metrics.hpp"

namespace kvote {

/// One (algorithm, hyper, metric) grid cell: the guessed cluster count and
/// the curve it was read from. Failed cells carry a reason instead.
struct CellResult {
  Algorithm algorithm = Algorithm::KMeans;
  int hyper_index = 0;
  int metric_index = 0;
  MetricId metric = MetricId::Inertia;
  int guessed_k = 0;
  MetricCurve curve;
  bool ok = false;
  std::string error;
};

/// Every cell of a grid evaluated against one dataset, in canonical
/// (algorithm, hyper_index, metric_index) order.
struct ResultTable {
  std::string dataset_id;
  GridSpec grid;
  std::vector<CellResult> cells;

  std::size_t failed_cells() const;
};

/// Exhaustive evaluation of the grid: for every algorithm j, hyperparameter
/// selection h and metric m, one guessed cluster count. The per-cell seed is
/// a stable hash of (master_seed, j, h), so all metrics over one fit share
/// clusterings and the result is identical for any worker count. Spectral
/// and HCA see deterministic subsamples of the data per the grid's caps.
/// Individual cell failures are recorded, not fatal; a grid losing more than
/// half its cells throws.
ResultTable evaluate_grid(const Dataset& data, const GridSpec& grid, int workers = 1);

enum class EnsembleConstruction { Raw, Mode };

/// Column view of the ensemble: per algorithm, the multiset of guessed
/// cluster counts. The full voting matrix is the implicit cross product of
/// the columns and is never materialized. Algorithms whose cells all failed
/// are dropped and listed.
struct EnsembleMatrix {
  struct Column {
    Algorithm algorithm = Algorithm::KMeans;
    std::vector<int> guesses;
  };
  EnsembleConstruction construction = EnsembleConstruction::Raw;
  std::vector<Column> columns;
  std::vector<Algorithm> dropped;
};

/// Raw construction: one entry per successful cell.
EnsembleMatrix build_raw(const ResultTable& table);

/// Mode construction: per (algorithm, hyper), the most common guess across
/// that hyper's metrics (ties to the smallest k).
EnsembleMatrix collapse_mode(const ResultTable& table);

EnsembleMatrix build_ensemble(const ResultTable& table, EnsembleConstruction construction);

/// Most common value; ties resolve to the smallest. Used for every mode in
/// the voting pipeline so results are deterministic.
int smallest_mode(std::span<const int> values);

/// Voting over the implicit cross-product matrix.
///
/// full: mode over all matrix entries, computed analytically as
///   count(v) = sum_j c_j(v) * prod_{l != j} |col_l|.
/// column_first: mode of each column, then mode of the column modes.
/// row_first: mode of each cross-product row, then mode of the row modes;
///   computed exactly by enumerating distinct-value combinations weighted by
///   their multiplicity products.
int vote_full(const EnsembleMatrix& ensemble);
int vote_column_first(const EnsembleMatrix& ensemble);
int vote_row_first(const EnsembleMatrix& ensemble);

/// An ensemble already materialized as explicit rows (one guess per
/// algorithm per row), the form the voting schemes are defined on.
struct RowMatrix {
  std::vector<std::vector<int>> rows;  // equal widths

  void validate() const;
};

int vote_full(const RowMatrix& matrix);
int vote_column_first(const RowMatrix& matrix);
int vote_row_first(const RowMatrix& matrix);

enum class StatsGrouping { Algorithm, AlgorithmMetric, AlgorithmHyper };

/// Accuracy statistics across a collection of result tables sharing one
/// grid. Each (algorithm, hyper, metric) combination scores the fraction of
/// datasets whose guess equals true_k (in percent); rows report mean, sample
/// std, min and max of those scores within each group.
struct AccuracyStatsRow {
  Algorithm algorithm = Algorithm::KMeans;
  std::optional<MetricId> metric;    // set for AlgorithmMetric grouping
  std::optional<int> hyper_index;    // set for AlgorithmHyper grouping
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  int readings = 0;
};

std::vector<AccuracyStatsRow> accuracy_stats(const std::vector<ResultTable>& tables, int true_k,
                                             StatsGrouping group_by);

/// Per-combination accuracies (fractions in [0, 1]) keyed by canonical cell
/// order; shared by accuracy_stats and the expected-value baseline.
std::vector<double> combination_accuracies(const std::vector<ResultTable>& tables, int true_k);

}  // namespace kvote

#endif  // KVOTE_ENSEMBLE_HPP
