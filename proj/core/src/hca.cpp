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

#include "kvote/hca.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "kvote/error.hpp"

namespace kvote {

void Dendrogram::validate() const {
  if (n < 2 || static_cast<int>(merges.size()) != n - 1)
    throw RuntimeFailure("Dendrogram: expected n - 1 merges");
  std::vector<bool> consumed(static_cast<std::size_t>(2 * n - 1), false);
  std::vector<int> sizes(static_cast<std::size_t>(2 * n - 1), 1);
  for (int t = 0; t < n - 1; ++t) {
    const auto& m = merges[static_cast<std::size_t>(t)];
    for (int id : {m.left, m.right}) {
      if (id < 0 || id >= n + t) throw RuntimeFailure("Dendrogram: id out of range");
      if (consumed[static_cast<std::size_t>(id)]) throw RuntimeFailure("Dendrogram: id consumed twice");
      consumed[static_cast<std::size_t>(id)] = true;
    }
    sizes[static_cast<std::size_t>(n + t)] =
        sizes[static_cast<std::size_t>(m.left)] + sizes[static_cast<std::size_t>(m.right)];
    if (m.new_size != sizes[static_cast<std::size_t>(n + t)])
      throw RuntimeFailure("Dendrogram: merge size mismatch");
  }
  if (merges.back().new_size != n) throw RuntimeFailure("Dendrogram: final merge must cover all points");
}

double Dendrogram::height_at(int m) const {
  if (m < 1 || m > n - 1) throw ValidationError("Dendrogram::height_at: m out of [1, n-1]");
  // Merge t reduces the partition from n - t to n - t - 1 clusters.
  return merges[static_cast<std::size_t>(n - m - 1)].height;
}

namespace {

// Lance-Williams recurrence on squared distances. d_ik, d_jk, d_ij are the
// current squared inter-cluster measures; s* are cluster sizes.
double lance_williams(Linkage method, double d_ik, double d_jk, double d_ij,
                      double s_i, double s_j, double s_k) {
  switch (method) {
    case Linkage::Single:
      return std::min(d_ik, d_jk);
    case Linkage::Ward: {
      const double denom = s_i + s_j + s_k;
      return ((s_i + s_k) * d_ik + (s_j + s_k) * d_jk - s_k * d_ij) / denom;
    }
    case Linkage::Centroid: {
      const double s_ij = s_i + s_j;
      return (s_i * d_ik + s_j * d_jk) / s_ij - (s_i * s_j * d_ij) / (s_ij * s_ij);
    }
    case Linkage::Median:
      return 0.5 * d_ik + 0.5 * d_jk - 0.25 * d_ij;
  }
  return 0.0;
}

}  // namespace

Dendrogram fit_hca(const Dataset& data, const HCAConfig& config) {
  const Eigen::Index n = data.n();
  if (n < 2) throw ValidationError("fit_hca: needs at least 2 points");

  // Full squared-distance matrix; slots index current clusters.
  Matrix D;
  {
    Vector sq = data.points.rowwise().squaredNorm();
    D = -2.0 * (data.points * data.points.transpose());
    D.colwise() += sq;
    D.rowwise() += sq.transpose();
    D = D.cwiseMax(0.0);
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int nn = static_cast<int>(n);

  std::vector<int> succ(static_cast<std::size_t>(nn) + 1);  // active slots, ascending
  std::vector<int> pred(static_cast<std::size_t>(nn) + 1);
  for (int i = 0; i <= nn; ++i) {
    succ[static_cast<std::size_t>(i)] = i + 1;
    pred[static_cast<std::size_t>(i)] = i - 1;
  }
  int first_active = 0;
  auto deactivate = [&](int slot) {
    const int p = pred[static_cast<std::size_t>(slot)];
    const int s = succ[static_cast<std::size_t>(slot)];
    if (p >= 0)
      succ[static_cast<std::size_t>(p)] = s;
    else
      first_active = s;
    if (s <= nn) pred[static_cast<std::size_t>(s)] = p;
  };

  std::vector<double> size(static_cast<std::size_t>(nn), 1.0);
  std::vector<int> node_id(static_cast<std::size_t>(nn));
  std::iota(node_id.begin(), node_id.end(), 0);

  // row_min[i] is a lower bound on min over active j > i of D(i, j);
  // stale-low entries are repaired when they surface as candidates.
  std::vector<double> row_min(static_cast<std::size_t>(nn), kInf);
  auto recompute_row = [&](int i) {
    double best = kInf;
    for (int j = succ[static_cast<std::size_t>(i)]; j < nn; j = succ[static_cast<std::size_t>(j)])
      if (D(i, j) < best) best = D(i, j);
    return best;
  };
  for (int i = first_active; i < nn; i = succ[static_cast<std::size_t>(i)])
    row_min[static_cast<std::size_t>(i)] = recompute_row(i);

  Dendrogram out;
  out.n = nn;
  out.merges.reserve(static_cast<std::size_t>(nn) - 1);

  for (int t = 0; t < nn - 1; ++t) {
    // Pop the smallest validated row minimum; prefer smaller i on ties.
    int a = -1;
    double dist = kInf;
    while (true) {
      double best = kInf;
      int best_i = -1;
      for (int i = first_active; i < nn; i = succ[static_cast<std::size_t>(i)]) {
        if (row_min[static_cast<std::size_t>(i)] < best) {
          best = row_min[static_cast<std::size_t>(i)];
          best_i = i;
        }
      }
      const double exact = recompute_row(best_i);
      if (exact == row_min[static_cast<std::size_t>(best_i)]) {
        a = best_i;
        dist = exact;
        break;
      }
      row_min[static_cast<std::size_t>(best_i)] = exact;  // was stale-low; retry
    }
    int b = -1;
    for (int j = succ[static_cast<std::size_t>(a)]; j < nn; j = succ[static_cast<std::size_t>(j)]) {
      if (D(a, j) == dist) {
        b = j;
        break;
      }
    }

    const double s_a = size[static_cast<std::size_t>(a)];
    const double s_b = size[static_cast<std::size_t>(b)];
    out.merges.push_back({std::min(node_id[static_cast<std::size_t>(a)], node_id[static_cast<std::size_t>(b)]),
                          std::max(node_id[static_cast<std::size_t>(a)], node_id[static_cast<std::size_t>(b)]),
                          std::sqrt(std::max(dist, 0.0)),
                          static_cast<int>(s_a + s_b)});

    deactivate(b);
    for (int k = first_active; k < nn; k = succ[static_cast<std::size_t>(k)]) {
      if (k == a) continue;
      const double updated = lance_williams(config.method, D(a, k), D(b, k), dist, s_a, s_b,
                                            size[static_cast<std::size_t>(k)]);
      D(a, k) = updated;
      D(k, a) = updated;
      // A decreased distance may undercut a cached minimum below it.
      if (k < a && updated < row_min[static_cast<std::size_t>(k)])
        row_min[static_cast<std::size_t>(k)] = updated;
    }
    size[static_cast<std::size_t>(a)] = s_a + s_b;
    node_id[static_cast<std::size_t>(a)] = nn + t;
    row_min[static_cast<std::size_t>(a)] = recompute_row(a);
  }
  return out;
}

Labeling cut_dendrogram(const Dendrogram& dendrogram, int k) {
  const int n = dendrogram.n;
  if (k < 1 || k > n) throw ValidationError("cut_dendrogram: k must be in [1, n]");

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };

  // rep maps a dendrogram node id to one of its member points.
  std::vector<int> rep(static_cast<std::size_t>(2 * n - 1), -1);
  for (int i = 0; i < n; ++i) rep[static_cast<std::size_t>(i)] = i;
  for (int t = 0; t < n - k; ++t) {
    const auto& m = dendrogram.merges[static_cast<std::size_t>(t)];
    const int u = rep[static_cast<std::size_t>(m.left)];
    const int v = rep[static_cast<std::size_t>(m.right)];
    parent[static_cast<std::size_t>(find(u))] = find(v);
    rep[static_cast<std::size_t>(n + t)] = u;
  }
  // Remaining merges still need representatives for id bookkeeping.
  for (int t = n - k; t < n - 1; ++t)
    rep[static_cast<std::size_t>(n + t)] =
        rep[static_cast<std::size_t>(dendrogram.merges[static_cast<std::size_t>(t)].left)];

  std::vector<int> raw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = find(i);
  return Labeling::from_assignments(std::move(raw));
}

}  // namespace kvote
