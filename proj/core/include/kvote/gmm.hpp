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

#ifndef KVOTE_GMM_HPP
#define KVOTE_GMM_HPP

#include <cstdint>
#include <vector>

#include "kvote/dataset.hpp"
#include "kvote/labeling.hpp"

namespace kvote {

enum class CovarianceType { Diag, Tied, Spherical };

struct GMMConfig {
  CovarianceType covariance_type = CovarianceType::Diag;
  double reg_covar = 1e-6;  // added to every variance term each M-step
  int n_init = 1;
  int max_iter = 100;
  double tol = 1e-3;  // on mean log-likelihood improvement

  void validate() const;
};

/// Fitted mixture. Covariance storage depends on the type:
///   Diag      k x d (per-component per-dimension variances)
///   Tied      d x d (one full covariance shared by all components)
///   Spherical k x 1 (per-component isotropic variance)
struct GMMResult {
  Labeling labeling;  // argmax responsibility, compacted
  Vector weights;     // length k, sums to 1
  Matrix means;       // k x d
  Matrix covariances;
  CovarianceType covariance_type = CovarianceType::Diag;
  double log_likelihood = 0.0;          // total over points, final iteration
  std::vector<double> log_likelihood_path;  // one entry per E-step
};

/// Expectation-maximization for a Gaussian mixture with k components.
/// Initialized from a k-means labeling; stops when the mean log-likelihood
/// improves by less than tol or max_iter is reached; best of n_init restarts
/// by final log-likelihood. Deterministic in seed.
GMMResult fit_gmm(const Dataset& data, int k, const GMMConfig& config, std::uint64_t seed);

/// Posterior component probabilities of each point under a fitted model.
Matrix gmm_responsibilities(const Matrix& points, const GMMResult& model);

}  // namespace kvote

#endif  // KVOTE_GMM_HPP
