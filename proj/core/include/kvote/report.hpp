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

#ifndef KVOTE_REPORT_HPP
#define KVOTE_REPORT_HPP

#include <string>
#include <vector>

#include "kvote/cache.hpp"

namespace kvote {

/// A rendered report: a title, a header row, and stringly-typed body rows.
/// Serializes to CSV or to an aligned text table; both renderings are
/// deterministic, so re-running a report over an unchanged cache is
/// byte-identical.
struct ReportTable {
  std::string name;
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Per-approach accuracy over the cache's datasets, in percent. Votes from
/// subsets of one parent dataset pool into a single modal estimate first.
/// Requires ground-truth labels on every dataset.
struct ApproachAccuracy {
  EnsembleConstruction construction = EnsembleConstruction::Raw;
  VoteScheme scheme = VoteScheme::Full;
  double percent = 0.0;
};
std::vector<ApproachAccuracy> approach_accuracies(const Cache& cache);

/// Strips a "/subset-NNN" suffix, yielding the parent dataset id.
std::string parent_dataset_id(const std::string& id);

enum class ReportKind { Table1, Table2, Table3, Table4, Table5, Rankings };

ReportKind report_kind_from_string(const std::string& s);
std::string to_string(ReportKind kind);

/// Builds one of the report tables from a loaded cache.
///   table1    accuracy stats per algorithm, across hyperparameters and metrics
///   table2    accuracy stats per algorithm with metric fixed to inertia
///   table3    accuracy stats per algorithm with the first hyperparameter set
///   table4    accuracy of the six construction x scheme voting approaches
///   table5    benchmark accuracies (expected value, consensus rows)
///   rankings  combination ranking (accuracy-based across tables, or
///             stability-based for a single table)
/// Missing prerequisite records raise RuntimeFailure naming the absent stage.
ReportTable emit_report(const Cache& cache, ReportKind kind);

}  // namespace kvote

#endif  // KVOTE_REPORT_HPP
