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

#include "kvote/cache.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "kvote/error.hpp"

namespace kvote {

using json = nlohmann::json;

std::string to_string(EnsembleConstruction c) {
  return c == EnsembleConstruction::Raw ? "raw" : "mode";
}

std::string to_string(VoteScheme s) {
  switch (s) {
    case VoteScheme::Full: return "full";
    case VoteScheme::Row: return "row";
    case VoteScheme::Col: return "col";
  }
  return "?";
}

EnsembleConstruction construction_from_string(const std::string& s) {
  if (s == "raw") return EnsembleConstruction::Raw;
  if (s == "mode") return EnsembleConstruction::Mode;
  throw ValidationError("unknown construction: " + s);
}

VoteScheme scheme_from_string(const std::string& s) {
  if (s == "full") return VoteScheme::Full;
  if (s == "row") return VoteScheme::Row;
  if (s == "col") return VoteScheme::Col;
  throw ValidationError("unknown scheme: " + s);
}

int vote(const EnsembleMatrix& ensemble, VoteScheme scheme) {
  switch (scheme) {
    case VoteScheme::Full: return vote_full(ensemble);
    case VoteScheme::Row: return vote_row_first(ensemble);
    case VoteScheme::Col: return vote_column_first(ensemble);
  }
  throw ValidationError("unknown scheme");
}

namespace {

json hyper_to_json(const HyperSelection& h) {
  json arr = json::array();
  for (const auto& [name, value] : h.values) arr.push_back(json::array({name, value}));
  return arr;
}

HyperSelection hyper_from_json(const json& arr) {
  HyperSelection h;
  for (const auto& pair : arr)
    h.values.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
  return h;
}

json grid_to_json(const GridSpec& grid) {
  json algorithms = json::array();
  for (const auto& ag : grid.algorithms) {
    json hypers = json::array();
    for (const auto& h : ag.hypers) hypers.push_back(hyper_to_json(h));
    json metrics = json::array();
    for (MetricId m : ag.metrics) metrics.push_back(to_string(m));
    algorithms.push_back(
        {{"algorithm", to_string(ag.algorithm)}, {"hypers", hypers}, {"metrics", metrics}});
  }
  return {{"type", "grid"},
          {"algorithms", algorithms},
          {"k_min", grid.k_min},
          {"k_max", grid.k_max},
          {"master_seed", grid.master_seed},
          {"spectral_cap", grid.spectral_cap},
          {"hca_cap", grid.hca_cap},
          {"silhouette_cap", grid.silhouette_cap}};
}

GridSpec grid_from_json(const json& j) {
  GridSpec grid;
  grid.k_min = j.at("k_min").get<int>();
  grid.k_max = j.at("k_max").get<int>();
  grid.master_seed = j.at("master_seed").get<std::uint64_t>();
  grid.spectral_cap = j.at("spectral_cap").get<std::int64_t>();
  grid.hca_cap = j.at("hca_cap").get<std::int64_t>();
  grid.silhouette_cap = j.at("silhouette_cap").get<std::int64_t>();
  for (const auto& a : j.at("algorithms")) {
    AlgorithmGrid ag;
    ag.algorithm = algorithm_from_string(a.at("algorithm").get<std::string>());
    for (const auto& h : a.at("hypers")) ag.hypers.push_back(hyper_from_json(h));
    for (const auto& m : a.at("metrics")) ag.metrics.push_back(metric_from_string(m.get<std::string>()));
    grid.algorithms.push_back(std::move(ag));
  }
  return grid;
}

json cell_to_json(const std::string& dataset_id, const GridSpec& grid, const CellResult& cell) {
  std::size_t j = 0;
  while (grid.algorithms[j].algorithm != cell.algorithm) ++j;
  json out = {{"type", "cell"},
              {"dataset", dataset_id},
              {"algorithm", to_string(cell.algorithm)},
              {"hyper_index", cell.hyper_index},
              {"hyper", hyper_to_json(grid.algorithms[j].hypers[static_cast<std::size_t>(cell.hyper_index)])},
              {"metric", to_string(cell.metric)},
              {"status", cell.ok ? "ok" : "failed"}};
  if (cell.ok) {
    out["guessed_k"] = cell.guessed_k;
    out["curve"] = {{"k", cell.curve.k_values}, {"score", cell.curve.scores}};
  } else {
    out["error"] = cell.error;
  }
  return out;
}

json benchmark_to_json(const BenchmarkRecord& b) {
  json out = {{"type", "benchmark"}, {"name", b.name}, {"value_percent", b.value_percent}};
  if (!b.algorithm.empty()) out["algorithm"] = b.algorithm;
  if (!b.variant.empty()) out["variant"] = b.variant;
  if (!b.hyper_display.empty()) out["hyper"] = b.hyper_display;
  return out;
}

}  // namespace

void save_cache(const std::string& path, const Cache& cache) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot open for writing: " + path);
  if (cache.grid) out << grid_to_json(*cache.grid).dump() << "\n";
  for (const auto& d : cache.datasets) {
    json rec = {{"type", "dataset"}, {"id", d.id}, {"n", d.n}, {"d", d.d}};
    if (d.true_k) rec["true_k"] = *d.true_k;
    out << rec.dump() << "\n";
  }
  for (const auto& table : cache.tables)
    for (const auto& cell : table.cells)
      out << cell_to_json(table.dataset_id, table.grid, cell).dump() << "\n";
  for (const auto& v : cache.votes) {
    json rec = {{"type", "vote"},
                {"dataset", v.dataset_id},
                {"construction", to_string(v.construction)},
                {"scheme", to_string(v.scheme)},
                {"k", v.k}};
    out << rec.dump() << "\n";
  }
  for (const auto& b : cache.benchmarks) out << benchmark_to_json(b).dump() << "\n";
  if (!out) throw RuntimeFailure("write failed: " + path);
}

Cache load_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot open cache: " + path);

  Cache cache;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw RuntimeFailure("cache line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string type = rec.at("type").get<std::string>();
    if (type == "grid") {
      cache.grid = grid_from_json(rec);
    } else if (type == "dataset") {
      DatasetRecord d;
      d.id = rec.at("id").get<std::string>();
      d.n = rec.at("n").get<std::int64_t>();
      d.d = rec.at("d").get<int>();
      if (rec.contains("true_k")) d.true_k = rec.at("true_k").get<int>();
      cache.datasets.push_back(std::move(d));
    } else if (type == "cell") {
      if (!cache.grid) throw RuntimeFailure("cache: cell record before grid record");
      const std::string dataset_id = rec.at("dataset").get<std::string>();
      if (cache.tables.empty() || cache.tables.back().dataset_id != dataset_id) {
        ResultTable t;
        t.dataset_id = dataset_id;
        t.grid = *cache.grid;
        cache.tables.push_back(std::move(t));
      }
      CellResult cell;
      cell.algorithm = algorithm_from_string(rec.at("algorithm").get<std::string>());
      cell.hyper_index = rec.at("hyper_index").get<int>();
      cell.metric = metric_from_string(rec.at("metric").get<std::string>());
      cell.ok = rec.at("status").get<std::string>() == "ok";
      if (cell.ok) {
        cell.guessed_k = rec.at("guessed_k").get<int>();
        cell.curve.k_values = rec.at("curve").at("k").get<std::vector<int>>();
        cell.curve.scores = rec.at("curve").at("score").get<std::vector<double>>();
        cell.curve.metric_name = to_string(cell.metric);
      } else {
        cell.error = rec.value("error", "");
      }
      // metric_index is positional within the algorithm's metric list
      const auto& ag = cache.grid->algorithms;
      for (const auto& a : ag)
        if (a.algorithm == cell.algorithm)
          for (std::size_t m = 0; m < a.metrics.size(); ++m)
            if (a.metrics[m] == cell.metric) cell.metric_index = static_cast<int>(m);
      cache.tables.back().cells.push_back(std::move(cell));
    } else if (type == "vote") {
      VoteRecord v;
      v.dataset_id = rec.at("dataset").get<std::string>();
      v.construction = construction_from_string(rec.at("construction").get<std::string>());
      v.scheme = scheme_from_string(rec.at("scheme").get<std::string>());
      v.k = rec.at("k").get<int>();
      cache.votes.push_back(std::move(v));
    } else if (type == "benchmark") {
      BenchmarkRecord b;
      b.name = rec.at("name").get<std::string>();
      b.value_percent = rec.at("value_percent").get<double>();
      b.algorithm = rec.value("algorithm", "");
      b.variant = rec.value("variant", "");
      b.hyper_display = rec.value("hyper", "");
      cache.benchmarks.push_back(std::move(b));
    } else {
      throw RuntimeFailure("cache line " + std::to_string(line_no) + ": unknown record type " + type);
    }
  }
  return cache;
}

void append_benchmarks(const std::string& path, const std::vector<BenchmarkRecord>& records) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw RuntimeFailure("cannot open for appending: " + path);
  for (const auto& b : records) out << benchmark_to_json(b).dump() << "\n";
  if (!out) throw RuntimeFailure("write failed: " + path);
}

}  // namespace kvote
