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

#include "kvote/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "kvote/error.hpp"
#include "kvote/selection.hpp"

namespace kvote {

namespace {

std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string display_name(Algorithm a) {
  switch (a) {
    case Algorithm::KMeans: return "K-means";
    case Algorithm::Gmm: return "GMM";
    case Algorithm::Hca: return "HCA";
    case Algorithm::Spectral: return "Spectral";
  }
  return "?";
}

int shared_true_k(const Cache& cache) {
  if (cache.datasets.empty()) throw RuntimeFailure("report: no dataset records in cache (run stage missing)");
  std::optional<int> k;
  for (const auto& d : cache.datasets) {
    if (!d.true_k) throw RuntimeFailure("report: dataset " + d.id + " has no ground-truth labels");
    if (k && *k != *d.true_k)
      throw RuntimeFailure("report: datasets disagree on the true cluster count");
    k = *d.true_k;
  }
  return *k;
}

void require_tables(const Cache& cache) {
  if (cache.tables.empty())
    throw RuntimeFailure("report: no cell records in cache (run stage missing)");
}

ReportTable stats_table(const Cache& cache, StatsGrouping grouping, ReportKind kind) {
  require_tables(cache);
  const int true_k = shared_true_k(cache);
  auto rows = accuracy_stats(cache.tables, true_k, grouping);

  // One column per algorithm, filtered to the table's fixed slice.
  std::vector<AccuracyStatsRow> picked;
  for (const auto& r : rows) {
    if (kind == ReportKind::Table2 && r.metric != MetricId::Inertia) continue;
    if (kind == ReportKind::Table3 && r.hyper_index != 0) continue;
    picked.push_back(r);
  }

  ReportTable out;
  out.name = to_string(kind);
  if (kind == ReportKind::Table1)
    out.title = "Stats for accuracy readings per algorithm.";
  else if (kind == ReportKind::Table2)
    out.title = "Stats for accuracy readings per algorithm-metric (inertia), across hyperparameters.";
  else
    out.title = "Stats for accuracy readings per algorithm-hyperparameter (first set), across metrics.";

  out.header.push_back("Stat");
  for (const auto& r : picked) out.header.push_back(display_name(r.algorithm));

  const char* stat_names[] = {"mean", "std", "min", "max"};
  for (int s = 0; s < 4; ++s) {
    std::vector<std::string> row{stat_names[s]};
    for (const auto& r : picked) {
      const double v = s == 0 ? r.mean : s == 1 ? r.stddev : s == 2 ? r.min : r.max;
      row.push_back(fmt2(v));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

ReportTable approaches_table(const Cache& cache) {
  const auto accuracies = approach_accuracies(cache);
  auto lookup = [&](EnsembleConstruction c, VoteScheme s) {
    for (const auto& a : accuracies)
      if (a.construction == c && a.scheme == s) return a.percent;
    throw RuntimeFailure("report: no votes for " + to_string(c) + "+" + to_string(s));
  };
  ReportTable out;
  out.name = "table4";
  out.title = "Accuracy of the six voting approaches (percent).";
  out.header = {"Scheme", "Raw", "Mode"};
  for (VoteScheme scheme : {VoteScheme::Full, VoteScheme::Row, VoteScheme::Col}) {
    out.rows.push_back({scheme == VoteScheme::Full ? "Full"
                        : scheme == VoteScheme::Row ? "Row"
                                                    : "Col",
                        fmt2(lookup(EnsembleConstruction::Raw, scheme)),
                        fmt2(lookup(EnsembleConstruction::Mode, scheme))});
  }
  return out;
}

ReportTable benchmarks_table(const Cache& cache) {
  if (cache.benchmarks.empty())
    throw RuntimeFailure("report: no benchmark records in cache (bench stage missing)");
  ReportTable out;
  out.name = "table5";
  out.title = "Benchmark accuracy (percent).";
  out.header = {"Benchmark", "Expected Value", "Consensus"};
  for (const auto& b : cache.benchmarks) {
    if (b.name == "expected_value") {
      out.rows.push_back({"---", fmt2(b.value_percent), "---"});
    } else if (b.name == "consensus") {
      std::string label = b.algorithm == "kmeans" ? "KMeans" : "GMM";
      label += b.variant == "best" ? " (B)" : " (D)";
      out.rows.push_back({label, "---", fmt2(b.value_percent)});
    }
  }
  return out;
}

ReportTable rankings_table(const Cache& cache) {
  require_tables(cache);
  if (cache.votes.empty())
    throw RuntimeFailure("report: no vote records in cache (vote stage missing)");

  // Global estimate: mode of the per-dataset votes (first recorded
  // construction+scheme pair).
  std::vector<int> ks;
  for (const auto& v : cache.votes)
    if (v.construction == cache.votes.front().construction && v.scheme == cache.votes.front().scheme)
      ks.push_back(v.k);
  const int global_k = smallest_mode(ks);

  ReportTable out;
  out.name = "rankings";
  out.header = {"algorithm", "hyperparameters", "metric", "score", "rank"};
  const GridSpec& grid = cache.tables.front().grid;
  if (cache.tables.size() > 1) {
    out.title = "Combination ranking by agreement with the global estimate k=" +
                std::to_string(global_k) + " across " + std::to_string(cache.tables.size()) +
                " tables.";
    for (const auto& cs : rank_by_accuracy(cache.tables, global_k)) {
      const auto& ag = *std::find_if(grid.algorithms.begin(), grid.algorithms.end(),
                                     [&](const AlgorithmGrid& g) { return g.algorithm == cs.algorithm; });
      out.rows.push_back({to_string(cs.algorithm),
                          ag.hypers[static_cast<std::size_t>(cs.hyper_index)].display(),
                          to_string(ag.metrics[static_cast<std::size_t>(*cs.metric_index)]),
                          fmt2(cs.score * 100.0), std::to_string(cs.rank)});
    }
  } else {
    out.title = "Combination ranking by metric stability at the voted k=" +
                std::to_string(global_k) + ".";
    for (const auto& cs : rank_by_stability(cache.tables.front(), global_k)) {
      const auto& ag = *std::find_if(grid.algorithms.begin(), grid.algorithms.end(),
                                     [&](const AlgorithmGrid& g) { return g.algorithm == cs.algorithm; });
      out.rows.push_back({to_string(cs.algorithm),
                          ag.hypers[static_cast<std::size_t>(cs.hyper_index)].display(), "",
                          fmt2(cs.score * 100.0), std::to_string(cs.rank)});
    }
  }
  return out;
}

}  // namespace

std::string parent_dataset_id(const std::string& id) {
  const auto pos = id.rfind("/subset-");
  return pos == std::string::npos ? id : id.substr(0, pos);
}

std::vector<ApproachAccuracy> approach_accuracies(const Cache& cache) {
  if (cache.votes.empty())
    throw RuntimeFailure("report: no vote records in cache (run stage missing)");
  const int true_k = shared_true_k(cache);

  std::vector<std::string> parents;
  for (const auto& d : cache.datasets) {
    const std::string p = parent_dataset_id(d.id);
    if (std::find(parents.begin(), parents.end(), p) == parents.end()) parents.push_back(p);
  }

  std::vector<ApproachAccuracy> out;
  for (EnsembleConstruction c : {EnsembleConstruction::Raw, EnsembleConstruction::Mode}) {
    for (VoteScheme scheme : {VoteScheme::Full, VoteScheme::Row, VoteScheme::Col}) {
      int correct = 0;
      int counted = 0;
      for (const auto& p : parents) {
        std::vector<int> ks;
        for (const auto& v : cache.votes)
          if (v.construction == c && v.scheme == scheme && parent_dataset_id(v.dataset_id) == p)
            ks.push_back(v.k);
        if (ks.empty()) continue;
        ++counted;
        if (smallest_mode(ks) == true_k) ++correct;
      }
      if (counted > 0) out.push_back({c, scheme, 100.0 * correct / counted});
    }
  }
  return out;
}

std::string ReportTable::to_csv() const {
  auto escape = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + escape(header[i]);
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + escape(row[i]);
    out += "\n";
  }
  return out;
}

std::string ReportTable::to_text() const {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());

  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += "  ";
      out += cells[i];
      out.append(width[i] - cells[i].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };

  std::string out = title.empty() ? "" : title + "\n";
  out += line(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

ReportKind report_kind_from_string(const std::string& s) {
  if (s == "table1") return ReportKind::Table1;
  if (s == "table2") return ReportKind::Table2;
  if (s == "table3") return ReportKind::Table3;
  if (s == "table4") return ReportKind::Table4;
  if (s == "table5") return ReportKind::Table5;
  if (s == "rankings") return ReportKind::Rankings;
  throw ValidationError("unknown report kind: " + s);
}

std::string to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::Table1: return "table1";
    case ReportKind::Table2: return "table2";
    case ReportKind::Table3: return "table3";
    case ReportKind::Table4: return "table4";
    case ReportKind::Table5: return "table5";
    case ReportKind::Rankings: return "rankings";
  }
  return "?";
}

ReportTable emit_report(const Cache& cache, ReportKind kind) {
  switch (kind) {
    case ReportKind::Table1: return stats_table(cache, StatsGrouping::Algorithm, kind);
    case ReportKind::Table2: return stats_table(cache, StatsGrouping::AlgorithmMetric, kind);
    case ReportKind::Table3: return stats_table(cache, StatsGrouping::AlgorithmHyper, kind);
    case ReportKind::Table4: return approaches_table(cache);
    case ReportKind::Table5: return benchmarks_table(cache);
    case ReportKind::Rankings: return rankings_table(cache);
  }
  throw ValidationError("unknown report kind");
}

}  // namespace kvote
