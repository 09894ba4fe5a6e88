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

#include "kvote/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "kvote/error.hpp"
#include "kvote/rng.hpp"

namespace kvote {

std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t m, Rng& rng) {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), std::int64_t{0});
  for (std::int64_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::int64_t> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  idx.resize(static_cast<std::size_t>(m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::optional<int> Dataset::true_k() const {
  if (!labels) return std::nullopt;
  int max_label = -1;
  for (int l : *labels) max_label = std::max(max_label, l);
  return max_label + 1;
}

void Dataset::validate() const {
  if (points.rows() < 1 || points.cols() < 1)
    throw ValidationError("dataset '" + id + "': needs n >= 1 and d >= 1");
  if (!points.allFinite())
    throw ValidationError("dataset '" + id + "': non-finite coordinate");
  if (labels) {
    if (static_cast<Eigen::Index>(labels->size()) != points.rows())
      throw ValidationError("dataset '" + id + "': label count != point count");
    for (int l : *labels)
      if (l < 0 || l >= static_cast<int>(points.rows()))
        throw ValidationError("dataset '" + id + "': label out of range");
  }
}

void BlobSpec::validate() const {
  if (n_centers < 1) throw ValidationError("BlobSpec.n_centers: must be >= 1");
  if (n_samples < n_centers) throw ValidationError("BlobSpec.n_samples: must be >= n_centers");
  if (n_features < 1) throw ValidationError("BlobSpec.n_features: must be >= 1");
  if (!(box_low < box_high)) throw ValidationError("BlobSpec.center_box: low must be < high");
  if (!(cluster_std > 0.0)) throw ValidationError("BlobSpec.cluster_std: must be > 0");
}

Dataset generate_blobs(const BlobSpec& spec, std::string id) {
  spec.validate();
  Rng rng(spec.seed);

  Matrix centers(spec.n_centers, spec.n_features);
  std::uniform_real_distribution<double> in_box(spec.box_low, spec.box_high);
  for (int c = 0; c < spec.n_centers; ++c)
    for (int f = 0; f < spec.n_features; ++f) centers(c, f) = in_box(rng);

  // Even split; earliest centers absorb the remainder.
  const std::int64_t base = spec.n_samples / spec.n_centers;
  const std::int64_t extra = spec.n_samples % spec.n_centers;

  Dataset out;
  out.id = std::move(id);
  out.points.resize(spec.n_samples, spec.n_features);
  out.labels.emplace(static_cast<std::size_t>(spec.n_samples));

  std::normal_distribution<double> noise(0.0, spec.cluster_std);
  std::int64_t row = 0;
  for (int c = 0; c < spec.n_centers; ++c) {
    const std::int64_t count = base + (c < extra ? 1 : 0);
    for (std::int64_t i = 0; i < count; ++i, ++row) {
      for (int f = 0; f < spec.n_features; ++f)
        out.points(row, f) = centers(c, f) + noise(rng);
      (*out.labels)[static_cast<std::size_t>(row)] = c;
    }
  }
  return out;
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<std::int64_t>& rows, std::string id) {
  Dataset out;
  out.id = std::move(id);
  out.points.resize(static_cast<Eigen::Index>(rows.size()), data.dim());
  if (data.labels) out.labels.emplace(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.points.row(static_cast<Eigen::Index>(i)) = data.points.row(rows[i]);
    if (data.labels) (*out.labels)[i] = (*data.labels)[static_cast<std::size_t>(rows[i])];
  }
  return out;
}

}  // namespace

std::vector<Dataset> split_subsets(const Dataset& data, int n_subsets, std::uint64_t seed) {
  if (n_subsets < 1) throw ValidationError("split_subsets: n_subsets must be >= 1");
  if (n_subsets > data.n()) throw ValidationError("split_subsets: n_subsets exceeds dataset size");

  std::vector<std::int64_t> perm(static_cast<std::size_t>(data.n()));
  std::iota(perm.begin(), perm.end(), std::int64_t{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  const std::int64_t n = data.n();
  const std::int64_t base = n / n_subsets;
  const std::int64_t extra = n % n_subsets;

  std::vector<Dataset> subsets;
  subsets.reserve(static_cast<std::size_t>(n_subsets));
  std::int64_t pos = 0;
  for (int s = 0; s < n_subsets; ++s) {
    const std::int64_t count = base + (s < extra ? 1 : 0);
    std::vector<std::int64_t> rows(perm.begin() + pos, perm.begin() + pos + count);
    std::sort(rows.begin(), rows.end());
    pos += count;
    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "/subset-%03d", s);
    subsets.push_back(take_rows(data, rows, data.id + suffix));
  }
  return subsets;
}

Dataset subsample(const Dataset& data, std::int64_t cap, std::uint64_t seed) {
  if (cap < 1) throw ValidationError("subsample: cap must be >= 1");
  if (data.n() <= cap) return data;
  Rng rng(seed);
  auto rows = sample_without_replacement(data.n(), cap, rng);
  return take_rows(data, rows, data.id);
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot open for writing: " + path);
  for (Eigen::Index f = 0; f < data.dim(); ++f) out << (f ? "," : "") << "f" << f;
  if (data.labels) out << ",label";
  out << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index f = 0; f < data.dim(); ++f) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.points(i, f));
      out << (f ? "," : "") << buf;
    }
    if (data.labels) out << "," << (*data.labels)[static_cast<std::size_t>(i)];
    out << "\n";
  }
  if (!out) throw RuntimeFailure("write failed: " + path);
}

Dataset load_csv(const std::string& path, std::string id) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure("cannot open: " + path);

  std::string line;
  if (!std::getline(in, line)) throw RuntimeFailure("empty CSV: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  bool has_labels = !header.empty() && header.back() == "label";
  const int d = static_cast<int>(header.size()) - (has_labels ? 1 : 0);
  if (d < 1) throw RuntimeFailure("CSV header has no feature columns: " + path);

  std::vector<double> values;
  std::vector<int> labels;
  std::int64_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col < d) {
        values.push_back(std::stod(cell));
      } else if (has_labels) {
        labels.push_back(std::stoi(cell));
      }
      ++col;
    }
    if (col != static_cast<int>(header.size()))
      throw RuntimeFailure("CSV row " + std::to_string(rows + 1) + " has " +
                           std::to_string(col) + " cells, expected " +
                           std::to_string(header.size()) + ": " + path);
    ++rows;
  }
  if (rows == 0) throw RuntimeFailure("CSV has no data rows: " + path);

  Dataset out;
  if (id.empty()) {
    auto slash = path.find_last_of("/\\");
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = stem.find_last_of('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    out.id = stem;
  } else {
    out.id = std::move(id);
  }
  out.points.resize(rows, d);
  for (std::int64_t i = 0; i < rows; ++i)
    for (int f = 0; f < d; ++f)
      out.points(i, f) = values[static_cast<std::size_t>(i) * d + f];
  if (has_labels) out.labels = std::move(labels);
  out.validate();
  return out;
}

}  // namespace kvote
