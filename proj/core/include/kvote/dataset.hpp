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

#ifndef KVOTE_DATASET_HPP
#define KVOTE_DATASET_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kvote {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A point cloud in feature space, one row per point, with optional
/// ground-truth cluster labels. Immutable by convention after construction;
/// safe to share across workers.
struct Dataset {
  Matrix points;                          // n x d
  std::optional<std::vector<int>> labels; // each in [0, L)
  std::string id;

  Eigen::Index n() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }

  /// Number of distinct labels, if labels are present.
  std::optional<int> true_k() const;

  /// Throws ValidationError when invariants are broken (empty data,
  /// non-finite coordinates, labels out of range).
  void validate() const;
};

/// Parameters for the isotropic Gaussian blob generator.
struct BlobSpec {
  std::int64_t n_samples = 0;
  int n_centers = 0;
  int n_features = 0;
  double box_low = -5.0;
  double box_high = 5.0;
  double cluster_std = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws cluster centers uniformly in the box, then scatters points around
/// them with isotropic Gaussian noise. Samples are divided as evenly as
/// possible among centers: the first n_samples % n_centers centers receive
/// one extra point. Deterministic in spec.seed.
Dataset generate_blobs(const BlobSpec& spec, std::string id = "blobs");

/// Random partition into n_subsets near-equal disjoint subsets whose union
/// is the whole dataset. Subset i gets id "<id>/subset-i".
std::vector<Dataset> split_subsets(const Dataset& data, int n_subsets, std::uint64_t seed);

/// Uniform sample without replacement of size cap, preserving row order.
/// Returns the input unchanged when n <= cap.
Dataset subsample(const Dataset& data, std::int64_t cap, std::uint64_t seed);

/// CSV persistence. Header row "f0,...,f{d-1}[,label]"; one row per point.
void save_csv(const Dataset& data, const std::string& path);
Dataset load_csv(const std::string& path, std::string id = "");

}  // namespace kvote

#endif  // KVOTE_DATASET_HPP
