#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "kvote/ensemble.hpp"
#include "kvote/error.hpp"

using namespace kvote;

namespace {

EnsembleMatrix columns_of(std::vector<std::vector<int>> cols) {
  EnsembleMatrix m;
  m.construction = EnsembleConstruction::Raw;
  Algorithm names[] = {Algorithm::KMeans, Algorithm::Gmm, Algorithm::Hca, Algorithm::Spectral};
  for (std::size_t j = 0; j < cols.size(); ++j) m.columns.push_back({names[j % 4], std::move(cols[j])});
  return m;
}

// Materialize the cross product and vote by brute force.
std::vector<std::vector<int>> materialize(const EnsembleMatrix& e) {
  std::vector<std::vector<int>> rows{{}};
  for (const auto& col : e.columns) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : rows)
      for (int v : col.guesses) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    rows = std::move(next);
  }
  return rows;
}

int brute_mode(const std::vector<int>& values) {
  std::map<int, int> counts;
  for (int v : values) ++counts[v];
  int best = 0, best_n = 0;
  for (auto [v, n] : counts)
    if (n > best_n) {
      best = v;
      best_n = n;
    }
  return best;
}

EnsembleMatrix random_ensemble(std::mt19937_64& rng, int max_cols = 4, int max_size = 6) {
  std::uniform_int_distribution<int> n_cols(1, max_cols);
  std::uniform_int_distribution<int> col_size(1, max_size);
  std::uniform_int_distribution<int> value(2, 6);
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(n_cols(rng)));
  for (auto& col : cols) {
    col.resize(static_cast<std::size_t>(col_size(rng)));
    for (auto& v : col) v = value(rng);
  }
  return columns_of(std::move(cols));
}

// The worked 5x4 voting example, treated as rows already materialized.
RowMatrix toy_matrix() {
  RowMatrix m;
  m.rows = {{2, 2, 2, 2}, {2, 2, 2, 2}, {3, 2, 3, 3}, {3, 3, 2, 3}, {3, 3, 3, 2}};
  return m;
}

}  // namespace

TEST_CASE("toy matrix votes reproduce the worked results") {
  RowMatrix toy = toy_matrix();
  CHECK(vote_full(toy) == 2);          // 11 twos vs 9 threes
  CHECK(vote_column_first(toy) == 2);  // column modes 3,2,2,2
  CHECK(vote_row_first(toy) == 3);     // row modes 2,2,3,3,3
}

TEST_CASE("vote_full flattens column counts analytically") {
  CHECK(vote_full(columns_of({{2, 3}, {3}})) == 3);  // rows (2,3),(3,3): one 2, three 3s
  CHECK(vote_full(columns_of({{3, 3}, {3}, {3, 3, 3}})) == 3);
}

TEST_CASE("vote_full equals brute force over the materialized product") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 400; ++trial) {
    EnsembleMatrix e = random_ensemble(rng);
    std::vector<int> flat;
    for (const auto& row : materialize(e)) flat.insert(flat.end(), row.begin(), row.end());
    CHECK(vote_full(e) == brute_mode(flat));
  }
}

TEST_CASE("vote_row_first equals brute force over the materialized product") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 400; ++trial) {
    EnsembleMatrix e = random_ensemble(rng);
    std::vector<int> row_modes;
    for (const auto& row : materialize(e)) row_modes.push_back(brute_mode(row));
    CHECK(vote_row_first(e) == brute_mode(row_modes));
  }
}

TEST_CASE("votes ignore column order and in-column order") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    EnsembleMatrix e = random_ensemble(rng);
    EnsembleMatrix shuffled = e;
    std::shuffle(shuffled.columns.begin(), shuffled.columns.end(), rng);
    for (auto& col : shuffled.columns) std::shuffle(col.guesses.begin(), col.guesses.end(), rng);
    CHECK(vote_full(e) == vote_full(shuffled));
    CHECK(vote_column_first(e) == vote_column_first(shuffled));
    CHECK(vote_row_first(e) == vote_row_first(shuffled));
  }
}

TEST_CASE("votes are invariant under uniform multiplicity scaling") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    EnsembleMatrix e = random_ensemble(rng, 3, 4);
    EnsembleMatrix tripled = e;
    for (auto& col : tripled.columns) {
      auto base = col.guesses;
      for (int copy = 0; copy < 2; ++copy)
        col.guesses.insert(col.guesses.end(), base.begin(), base.end());
    }
    CHECK(vote_full(e) == vote_full(tripled));
    CHECK(vote_column_first(e) == vote_column_first(tripled));
    CHECK(vote_row_first(e) == vote_row_first(tripled));
  }
}

TEST_CASE("votes return a value present in some column") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 200; ++trial) {
    EnsembleMatrix e = random_ensemble(rng);
    for (int v : {vote_full(e), vote_column_first(e), vote_row_first(e)}) {
      bool present = false;
      for (const auto& col : e.columns)
        present = present || std::count(col.guesses.begin(), col.guesses.end(), v) > 0;
      CHECK(present);
    }
  }
}

TEST_CASE("column-first follows the smallest-k tie-break") {
  CHECK(vote_column_first(columns_of({{3}, {3}, {2}, {2}})) == 2);
  CHECK(vote_column_first(columns_of({{5, 5, 2}})) == 5);
}

TEST_CASE("the default grid matches the published layout") {
  GridSpec grid = default_grid(0);
  grid.validate();
  REQUIRE(grid.algorithms.size() == 4);
  CHECK(grid.algorithms[0].hypers.size() == 16);
  CHECK(grid.algorithms[1].hypers.size() == 18);
  CHECK(grid.algorithms[2].hypers.size() == 4);
  CHECK(grid.algorithms[3].hypers.size() == 18);
  CHECK(grid.algorithms[0].metrics.size() == 4);
  CHECK(grid.algorithms[1].metrics.size() == 4);
  CHECK(grid.algorithms[2].metrics.size() == 4);
  CHECK(grid.algorithms[3].metrics.size() == 2);
  CHECK(grid.total_cells() == 16 * 4 + 18 * 4 + 4 * 4 + 18 * 2);
  CHECK(grid.total_cells() == 188);

  // Geometric ranges hit their published endpoints.
  CHECK(grid.algorithms[0].hypers.front().get_double("reassignment_ratio") ==
        doctest::Approx(1e-4));
  CHECK(grid.algorithms[0].hypers[7].get_double("reassignment_ratio") == doctest::Approx(0.5));
  CHECK(grid.algorithms[1].hypers.front().get("covariance_type") == "diag");
  CHECK(grid.algorithms[1].hypers.front().get_double("reg_covar") == doctest::Approx(1e-8));
}

namespace {

// A tiny synthetic table: two algorithms, controllable guesses.
ResultTable synthetic_table(const std::vector<std::vector<std::vector<int>>>& guesses_by_algo) {
  GridSpec grid;
  grid.k_min = 2;
  grid.k_max = 6;
  Algorithm names[] = {Algorithm::KMeans, Algorithm::Gmm, Algorithm::Hca, Algorithm::Spectral};
  ResultTable table;
  table.dataset_id = "synthetic";
  for (std::size_t j = 0; j < guesses_by_algo.size(); ++j) {
    AlgorithmGrid ag;
    ag.algorithm = names[j];
    const std::size_t n_metrics = guesses_by_algo[j].front().size();
    for (std::size_t h = 0; h < guesses_by_algo[j].size(); ++h)
      ag.hypers.push_back({{{"h", std::to_string(h)}}});
    for (std::size_t m = 0; m < n_metrics; ++m) ag.metrics.push_back(MetricId::Inertia);
    grid.algorithms.push_back(ag);
  }
  table.grid = grid;
  for (std::size_t j = 0; j < guesses_by_algo.size(); ++j)
    for (std::size_t h = 0; h < guesses_by_algo[j].size(); ++h)
      for (std::size_t m = 0; m < guesses_by_algo[j][h].size(); ++m) {
        CellResult cell;
        cell.algorithm = names[j];
        cell.hyper_index = static_cast<int>(h);
        cell.metric_index = static_cast<int>(m);
        cell.metric = MetricId::Inertia;
        cell.guessed_k = guesses_by_algo[j][h][m];
        cell.ok = cell.guessed_k > 0;  // 0 encodes a failed cell
        if (!cell.ok) cell.error = "synthetic failure";
        table.cells.push_back(cell);
      }
  return table;
}

}  // namespace

TEST_CASE("collapse_mode takes per-hyper metric modes") {
  ResultTable table = synthetic_table({{{3, 3, 2, 4}, {2, 2, 3, 3}}});
  EnsembleMatrix mode = collapse_mode(table);
  REQUIRE(mode.columns.size() == 1);
  CHECK(mode.columns[0].guesses == std::vector<int>{3, 2});

  EnsembleMatrix raw = build_raw(table);
  CHECK(raw.columns[0].guesses == std::vector<int>{3, 3, 2, 4, 2, 2, 3, 3});
}

TEST_CASE("failed cells drop out of the ensemble") {
  ResultTable table = synthetic_table({{{3, 0, 3}}, {{0, 0, 0}}});
  EnsembleMatrix raw = build_raw(table);
  REQUIRE(raw.columns.size() == 1);  // second algorithm lost every cell
  CHECK(raw.columns[0].guesses == std::vector<int>{3, 3});
  REQUIRE(raw.dropped.size() == 1);
  CHECK(raw.dropped[0] == Algorithm::Gmm);

  EnsembleMatrix mode = collapse_mode(table);
  CHECK(mode.columns[0].guesses == std::vector<int>{3});
}

TEST_CASE("accuracy_stats on a perfect grid") {
  std::vector<ResultTable> tables = {synthetic_table({{{3, 3}, {3, 3}}, {{3, 3}}}),
                                     synthetic_table({{{3, 3}, {3, 3}}, {{3, 3}}})};
  auto rows = accuracy_stats(tables, 3, StatsGrouping::Algorithm);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.mean == 100.0);
    CHECK(r.stddev == 0.0);
    CHECK(r.min == 100.0);
    CHECK(r.max == 100.0);
  }
  CHECK(rows[0].readings == 4);
  CHECK(rows[1].readings == 2);
}

TEST_CASE("accuracy_stats single-table fractions are 0 or 100") {
  std::vector<ResultTable> tables = {synthetic_table({{{3, 2}}})};
  auto rows = accuracy_stats(tables, 3, StatsGrouping::AlgorithmMetric);
  REQUIRE(rows.size() == 1);  // one metric id over two slots
  auto hyper_rows = accuracy_stats(tables, 3, StatsGrouping::AlgorithmHyper);
  REQUIRE(hyper_rows.size() == 1);
  CHECK(hyper_rows[0].mean == 50.0);
  CHECK(hyper_rows[0].min == 0.0);
  CHECK(hyper_rows[0].max == 100.0);
}

TEST_CASE("accuracy_stats rejects mismatched grids") {
  std::vector<ResultTable> tables = {synthetic_table({{{3, 3}}}), synthetic_table({{{3, 3}, {3, 3}}})};
  CHECK_THROWS_AS(accuracy_stats(tables, 3, StatsGrouping::Algorithm), ValidationError);
}
