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

#ifndef KVOTE_EXPERIMENT_HPP
#define KVOTE_EXPERIMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "kvote/cache.hpp"
#include "kvote/dataset.hpp"
#include "kvote/report.hpp"

namespace kvote {

/// A whole experiment: where the data comes from, the grid to evaluate, the
/// preferred voting approach, and where outputs land. Exactly one dataset
/// source (generated blobs or CSV paths) must be set.
struct ExperimentConfig {
  struct BlobsSource {
    int count = 25;
    BlobSpec spec;
  };
  std::optional<BlobsSource> blobs;
  std::vector<std::string> csv_paths;

  GridSpec grid;
  EnsembleConstruction construction = EnsembleConstruction::Mode;
  VoteScheme scheme = VoteScheme::Full;
  std::optional<int> subsets;  // split each dataset before evaluation
  std::string out_dir = "out";

  void validate() const;
};

/// The stock configuration: the default grid over 25 generated
/// three-cluster blob datasets.
ExperimentConfig default_experiment_config(std::uint64_t seed = 0);

/// Reads a JSON experiment config; absent sections fall back to defaults.
ExperimentConfig load_experiment_config(const std::string& path);

/// Renders a config back to its JSON form (round-trips through load).
std::string experiment_config_to_json(const ExperimentConfig& config);

struct ExperimentSummary {
  std::string cache_path;
  std::size_t total_cells = 0;
  std::size_t failed_cells = 0;
  std::optional<int> true_k;
  std::vector<ApproachAccuracy> approaches;           // filled when truth known
  std::vector<std::pair<std::string, int>> estimates;  // configured vote per parent dataset

  std::string to_text() const;
};

/// Runs the full pipeline: materialize datasets (splitting into subsets when
/// configured), evaluate the grid per dataset, vote with all six
/// construction x scheme approaches, persist the cache and a summary under
/// out_dir. Fully reproducible for a fixed config and master seed, whatever
/// the worker count.
ExperimentSummary run_experiment(const ExperimentConfig& config, int workers);

}  // namespace kvote

#endif  // KVOTE_EXPERIMENT_HPP
