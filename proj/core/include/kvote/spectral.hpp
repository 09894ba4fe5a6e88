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

#ifndef KVOTE_SPECTRAL_HPP
#define KVOTE_SPECTRAL_HPP

#include <cstdint>

#include "kvote/dataset.hpp"
#include "kvote/labeling.hpp"

namespace kvote {

enum class Affinity { Laplacian, Precomputed, Rbf, Sigmoid };
enum class NeighborMetric { Cosine, L2, L1 };

struct SpectralConfig {
  Affinity affinity = Affinity::Rbf;
  // metric and n_neighbors apply only to Precomputed; gamma only to kernels.
  NeighborMetric metric = NeighborMetric::L2;
  int n_neighbors = 10;
  double gamma = 1.0;

  void validate() const;
};

/// Builds the n x n symmetric non-negative affinity matrix.
///   rbf         exp(-gamma * ||x-y||_2^2)
///   laplacian   exp(-gamma * ||x-y||_1)
///   sigmoid     tanh(gamma * <x,y> + 1), negatives clamped to 0
///   precomputed k-nearest-neighbor connectivity graph under the configured
///               metric, symmetrized by max(W, W^T)
/// Kernel affinities have unit diagonal; the kNN graph has zero diagonal.
Matrix build_affinity(const Dataset& data, const SpectralConfig& config);

/// Eigendecomposition of the symmetric normalized Laplacian
/// L = I - D^(-1/2) W D^(-1/2), eigenvalues ascending. Zero-degree vertices
/// are given degree 1 so the normalization stays finite.
struct SpectralBasis {
  Matrix vectors;  // n x n, columns ordered by ascending eigenvalue
  Vector values;
};
SpectralBasis laplacian_eigenbasis(const Matrix& affinity);

/// k-means over the row-normalized n x k spectral embedding.
Labeling cluster_embedding(const SpectralBasis& basis, int k, std::uint64_t seed);

/// Full pipeline: affinity, Laplacian eigenbasis, embedding k-means.
Labeling fit_spectral(const Dataset& data, int k, const SpectralConfig& config, std::uint64_t seed);

}  // namespace kvote

#endif  // KVOTE_SPECTRAL_HPP
