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

#include "kvote/grid.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "kvote/error.hpp"

namespace kvote {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::KMeans: return "kmeans";
    case Algorithm::Gmm: return "gmm";
    case Algorithm::Hca: return "hca";
    case Algorithm::Spectral: return "spectral";
  }
  return "?";
}

std::string to_string(MetricId m) {
  switch (m) {
    case MetricId::Aic: return "aic";
    case MetricId::Bic: return "bic";
    case MetricId::Inertia: return "inertia";
    case MetricId::Silhouette: return "silhouette";
    case MetricId::Elbow: return "elbow";
    case MetricId::MaxDiff: return "max_diff";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "kmeans") return Algorithm::KMeans;
  if (s == "gmm") return Algorithm::Gmm;
  if (s == "hca") return Algorithm::Hca;
  if (s == "spectral") return Algorithm::Spectral;
  throw ValidationError("unknown algorithm: " + s);
}

MetricId metric_from_string(const std::string& s) {
  if (s == "aic") return MetricId::Aic;
  if (s == "bic") return MetricId::Bic;
  if (s == "inertia") return MetricId::Inertia;
  if (s == "silhouette") return MetricId::Silhouette;
  if (s == "elbow") return MetricId::Elbow;
  if (s == "max_diff") return MetricId::MaxDiff;
  throw ValidationError("unknown metric: " + s);
}

const std::string& HyperSelection::get(const std::string& name) const {
  for (const auto& [key, value] : values)
    if (key == name) return value;
  throw ValidationError("hyperparameter not set: " + name);
}

double HyperSelection::get_double(const std::string& name) const { return std::stod(get(name)); }
int HyperSelection::get_int(const std::string& name) const { return std::stoi(get(name)); }

bool HyperSelection::has(const std::string& name) const {
  for (const auto& [key, value] : values)
    if (key == name) return true;
  return false;
}

std::string HyperSelection::display() const {
  std::string out;
  for (const auto& [key, value] : values) {
    if (!out.empty()) out += " ";
    out += key + "=" + value;
  }
  return out;
}

void GridSpec::validate() const {
  if (algorithms.empty()) throw ValidationError("GridSpec: no algorithms");
  std::set<Algorithm> seen;
  for (const auto& g : algorithms) {
    if (!seen.insert(g.algorithm).second)
      throw ValidationError("GridSpec: duplicate algorithm " + to_string(g.algorithm));
    if (g.hypers.empty())
      throw ValidationError("GridSpec: empty hyperparameter set for " + to_string(g.algorithm));
    if (g.metrics.empty())
      throw ValidationError("GridSpec: empty metric set for " + to_string(g.algorithm));
  }
  if (k_min < 2) throw ValidationError("GridSpec: k_min must be >= 2");
  if (k_max < k_min) throw ValidationError("GridSpec: k_max must be >= k_min");
  if (spectral_cap < 1 || hca_cap < 1 || silhouette_cap < 1)
    throw ValidationError("GridSpec: subsample caps must be >= 1");
}

std::size_t GridSpec::total_cells() const {
  std::size_t total = 0;
  for (const auto& g : algorithms) total += g.hypers.size() * g.metrics.size();
  return total;
}

std::vector<double> geomspace(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi > 0.0))
    throw ValidationError("geomspace: needs n >= 1 and positive endpoints");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(std::log(lo) + step * i);
  out.back() = hi;  // pin the endpoint against rounding
  return out;
}

std::string format_hyper_value(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

GridSpec default_grid(std::uint64_t master_seed) {
  GridSpec spec;
  spec.master_seed = master_seed;

  {
    AlgorithmGrid g;
    g.algorithm = Algorithm::KMeans;
    for (const char* init : {"k-means++", "random"})
      for (double ratio : geomspace(1e-4, 0.5, 8))
        g.hypers.push_back({{{"init", init}, {"reassignment_ratio", format_hyper_value(ratio)}}});
    g.metrics = {MetricId::Aic, MetricId::Bic, MetricId::Inertia, MetricId::Silhouette};
    spec.algorithms.push_back(std::move(g));
  }
  {
    AlgorithmGrid g;
    g.algorithm = Algorithm::Gmm;
    for (const char* cov : {"diag", "tied", "spherical"})
      for (double reg : geomspace(1e-8, 1e-2, 6))
        g.hypers.push_back({{{"covariance_type", cov}, {"reg_covar", format_hyper_value(reg)}}});
    g.metrics = {MetricId::Aic, MetricId::Bic, MetricId::Inertia, MetricId::Silhouette};
    spec.algorithms.push_back(std::move(g));
  }
  {
    AlgorithmGrid g;
    g.algorithm = Algorithm::Hca;
    for (const char* method : {"centroid", "median", "single", "ward"})
      g.hypers.push_back({{{"method", method}, {"metric", "euclidean"}}});
    g.metrics = {MetricId::Elbow, MetricId::Inertia, MetricId::Silhouette, MetricId::MaxDiff};
    spec.algorithms.push_back(std::move(g));
  }
  {
    AlgorithmGrid g;
    g.algorithm = Algorithm::Spectral;
    for (const char* affinity : {"laplacian", "rbf", "sigmoid"})
      for (double gamma : {0.1, 1.0, 10.0})
        g.hypers.push_back({{{"affinity", affinity}, {"gamma", format_hyper_value(gamma)}}});
    for (const char* metric : {"cosine", "l2", "l1"})
      for (int neighbors : {5, 20, 100})
        g.hypers.push_back({{{"affinity", "precomputed"},
                             {"metric", metric},
                             {"n_neighbors", std::to_string(neighbors)}}});
    g.metrics = {MetricId::Inertia, MetricId::Silhouette};
    spec.algorithms.push_back(std::move(g));
  }
  return spec;
}

KMeansConfig kmeans_config_from(const HyperSelection& hyper) {
  KMeansConfig cfg;
  if (hyper.has("init")) {
    const std::string& init = hyper.get("init");
    if (init == "k-means++")
      cfg.init = KMeansInit::KMeansPlusPlus;
    else if (init == "random")
      cfg.init = KMeansInit::Random;
    else
      throw ValidationError("unknown k-means init: " + init);
  }
  if (hyper.has("reassignment_ratio")) cfg.reassignment_ratio = hyper.get_double("reassignment_ratio");
  if (hyper.has("batch_size")) cfg.batch_size = hyper.get_int("batch_size");
  if (hyper.has("n_init")) cfg.n_init = hyper.get_int("n_init");
  if (hyper.has("max_iter")) cfg.max_iter = hyper.get_int("max_iter");
  if (hyper.has("tol")) cfg.tol = hyper.get_double("tol");
  return cfg;
}

GMMConfig gmm_config_from(const HyperSelection& hyper) {
  GMMConfig cfg;
  if (hyper.has("covariance_type")) {
    const std::string& cov = hyper.get("covariance_type");
    if (cov == "diag")
      cfg.covariance_type = CovarianceType::Diag;
    else if (cov == "tied")
      cfg.covariance_type = CovarianceType::Tied;
    else if (cov == "spherical")
      cfg.covariance_type = CovarianceType::Spherical;
    else
      throw ValidationError("unknown GMM covariance_type: " + cov);
  }
  if (hyper.has("reg_covar")) cfg.reg_covar = hyper.get_double("reg_covar");
  if (hyper.has("n_init")) cfg.n_init = hyper.get_int("n_init");
  if (hyper.has("max_iter")) cfg.max_iter = hyper.get_int("max_iter");
  if (hyper.has("tol")) cfg.tol = hyper.get_double("tol");
  return cfg;
}

HCAConfig hca_config_from(const HyperSelection& hyper) {
  HCAConfig cfg;
  if (hyper.has("metric") && hyper.get("metric") != "euclidean")
    throw ValidationError("HCA metric must be euclidean");
  if (hyper.has("method")) {
    const std::string& m = hyper.get("method");
    if (m == "centroid")
      cfg.method = Linkage::Centroid;
    else if (m == "median")
      cfg.method = Linkage::Median;
    else if (m == "single")
      cfg.method = Linkage::Single;
    else if (m == "ward")
      cfg.method = Linkage::Ward;
    else
      throw ValidationError("unknown HCA method: " + m);
  }
  return cfg;
}

SpectralConfig spectral_config_from(const HyperSelection& hyper) {
  SpectralConfig cfg;
  const std::string& aff = hyper.get("affinity");
  if (aff == "laplacian")
    cfg.affinity = Affinity::Laplacian;
  else if (aff == "precomputed")
    cfg.affinity = Affinity::Precomputed;
  else if (aff == "rbf")
    cfg.affinity = Affinity::Rbf;
  else if (aff == "sigmoid")
    cfg.affinity = Affinity::Sigmoid;
  else
    throw ValidationError("unknown spectral affinity: " + aff);

  if (cfg.affinity == Affinity::Precomputed) {
    const std::string& metric = hyper.get("metric");
    if (metric == "cosine")
      cfg.metric = NeighborMetric::Cosine;
    else if (metric == "l2")
      cfg.metric = NeighborMetric::L2;
    else if (metric == "l1")
      cfg.metric = NeighborMetric::L1;
    else
      throw ValidationError("unknown neighbor metric: " + metric);
    cfg.n_neighbors = hyper.get_int("n_neighbors");
  } else {
    cfg.gamma = hyper.get_double("gamma");
  }
  return cfg;
}

}  // namespace kvote
