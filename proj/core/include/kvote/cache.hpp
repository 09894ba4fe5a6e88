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

#ifndef KVOTE_CACHE_HPP
#define KVOTE_CACHE_HPP

#include <optional>
#include <string>
#include <vector>

#include "kvote/ensemble.hpp"

namespace kvote {

enum class VoteScheme { Full, Row, Col };

std::string to_string(EnsembleConstruction c);
std::string to_string(VoteScheme s);
EnsembleConstruction construction_from_string(const std::string& s);
VoteScheme scheme_from_string(const std::string& s);

/// Dispatch to the scheme's voting function.
int vote(const EnsembleMatrix& ensemble, VoteScheme scheme);

struct DatasetRecord {
  std::string id;
  std::int64_t n = 0;
  int d = 0;
  std::optional<int> true_k;
};

struct VoteRecord {
  std::string dataset_id;
  EnsembleConstruction construction = EnsembleConstruction::Raw;
  VoteScheme scheme = VoteScheme::Full;
  int k = 0;
};

struct BenchmarkRecord {
  std::string name;                 // "expected_value" or "consensus"
  std::string algorithm;            // consensus only
  std::string variant;              // consensus only: "default" or "best"
  std::string hyper_display;        // consensus only
  double value_percent = 0.0;
};

/// Everything the pipeline persists between stages, as line-delimited JSON
/// records: one grid record, then dataset records, cell records in canonical
/// order, vote records, benchmark records. Writing is deterministic; two
/// identical runs produce byte-identical files.
struct Cache {
  std::optional<GridSpec> grid;
  std::vector<DatasetRecord> datasets;
  std::vector<ResultTable> tables;  // one per dataset, file order
  std::vector<VoteRecord> votes;
  std::vector<BenchmarkRecord> benchmarks;
};

void save_cache(const std::string& path, const Cache& cache);
Cache load_cache(const std::string& path);

/// Appends benchmark records to an existing cache file.
void append_benchmarks(const std::string& path, const std::vector<BenchmarkRecord>& records);

}  // namespace kvote

#endif  // KVOTE_CACHE_HPP
