#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kvote/error.hpp"
#include "kvote/hca.hpp"

using namespace kvote;

namespace {

Dataset points_1d(const std::vector<double>& xs) {
  Dataset d;
  d.id = "1d";
  d.points.resize(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) d.points(static_cast<Eigen::Index>(i), 0) = xs[i];
  return d;
}

// Prim's algorithm: sorted MST edge weights, the single-linkage oracle.
std::vector<double> mst_edge_weights(const Matrix& X) {
  const Eigen::Index n = X.rows();
  std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
  std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<double> weights;
  in_tree[0] = true;
  for (Eigen::Index j = 1; j < n; ++j) best[static_cast<std::size_t>(j)] = (X.row(0) - X.row(j)).norm();
  for (Eigen::Index step = 1; step < n; ++step) {
    Eigen::Index pick = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!in_tree[static_cast<std::size_t>(j)] &&
          (pick < 0 || best[static_cast<std::size_t>(j)] < best[static_cast<std::size_t>(pick)]))
        pick = j;
    weights.push_back(best[static_cast<std::size_t>(pick)]);
    in_tree[static_cast<std::size_t>(pick)] = true;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!in_tree[static_cast<std::size_t>(j)])
        best[static_cast<std::size_t>(j)] =
            std::min(best[static_cast<std::size_t>(j)], (X.row(pick) - X.row(j)).norm());
  }
  std::sort(weights.begin(), weights.end());
  return weights;
}

}  // namespace

TEST_CASE("single linkage on {0,1,3} merges nearest pairs") {
  Dataset data = points_1d({0.0, 1.0, 3.0});
  HCAConfig cfg;
  cfg.method = Linkage::Single;
  Dendrogram dendro = fit_hca(data, cfg);
  dendro.validate();
  REQUIRE(dendro.merges.size() == 2);
  CHECK(dendro.merges[0].left == 0);
  CHECK(dendro.merges[0].right == 1);
  CHECK(dendro.merges[0].height == doctest::Approx(1.0));
  CHECK(dendro.merges[1].left == 2);
  CHECK(dendro.merges[1].right == 3);  // node 3 is the first merge
  CHECK(dendro.merges[1].height == doctest::Approx(2.0));

  Labeling cut = cut_dendrogram(dendro, 2);
  CHECK(cut.assignments == std::vector<int>{0, 0, 1});
}

TEST_CASE("single linkage equals the MST oracle") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> n_dist(3, 64);
  std::uniform_int_distribution<int> d_dist(1, 4);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  HCAConfig cfg;
  cfg.method = Linkage::Single;
  for (int trial = 0; trial < 60; ++trial) {
    Dataset data;
    data.id = "mst";
    data.points.resize(n_dist(rng), d_dist(rng));
    for (Eigen::Index i = 0; i < data.n(); ++i)
      for (Eigen::Index f = 0; f < data.dim(); ++f) data.points(i, f) = coord(rng);

    Dendrogram dendro = fit_hca(data, cfg);
    dendro.validate();
    std::vector<double> heights;
    for (const auto& m : dendro.merges) heights.push_back(m.height);
    std::sort(heights.begin(), heights.end());
    const auto mst = mst_edge_weights(data.points);
    REQUIRE(heights.size() == mst.size());
    for (std::size_t i = 0; i < mst.size(); ++i)
      CHECK(heights[i] == doctest::Approx(mst[i]).epsilon(1e-9));
  }
}

TEST_CASE("ward merge heights never decrease") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  HCAConfig cfg;
  cfg.method = Linkage::Ward;
  for (int trial = 0; trial < 20; ++trial) {
    Dataset data;
    data.id = "ward";
    data.points.resize(80, 2);
    for (Eigen::Index i = 0; i < data.n(); ++i)
      for (Eigen::Index f = 0; f < 2; ++f) data.points(i, f) = coord(rng);
    Dendrogram dendro = fit_hca(data, cfg);
    for (std::size_t t = 1; t < dendro.merges.size(); ++t)
      CHECK(dendro.merges[t].height >= dendro.merges[t - 1].height * (1.0 - 1e-12));
  }
}

TEST_CASE("cut_dendrogram spans all cluster counts") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  Dataset data;
  data.id = "cuts";
  data.points.resize(40, 2);
  for (Eigen::Index i = 0; i < data.n(); ++i)
    for (Eigen::Index f = 0; f < 2; ++f) data.points(i, f) = coord(rng);

  for (Linkage method : {Linkage::Centroid, Linkage::Median, Linkage::Single, Linkage::Ward}) {
    HCAConfig cfg;
    cfg.method = method;
    Dendrogram dendro = fit_hca(data, cfg);
    dendro.validate();

    Labeling all = cut_dendrogram(dendro, 1);
    CHECK(all.k == 1);
    Labeling singletons = cut_dendrogram(dendro, static_cast<int>(data.n()));
    CHECK(singletons.k == data.n());

    // Successive cuts differ by exactly one cluster split.
    for (int k = 1; k < 10; ++k) {
      Labeling coarse = cut_dendrogram(dendro, k);
      Labeling fine = cut_dendrogram(dendro, k + 1);
      CHECK(coarse.k == k);
      CHECK(fine.k == k + 1);
      // Each fine cluster maps into one coarse cluster.
      std::vector<int> fine_to_coarse(static_cast<std::size_t>(fine.k), -1);
      for (std::size_t i = 0; i < coarse.assignments.size(); ++i) {
        int& slot = fine_to_coarse[static_cast<std::size_t>(fine.assignments[i])];
        if (slot < 0) slot = coarse.assignments[i];
        CHECK(slot == coarse.assignments[i]);
      }
      // Exactly one coarse cluster hosts two fine clusters.
      std::vector<int> hosts(static_cast<std::size_t>(coarse.k), 0);
      for (int c : fine_to_coarse) ++hosts[static_cast<std::size_t>(c)];
      CHECK(std::count(hosts.begin(), hosts.end(), 2) == 1);
      CHECK(std::count(hosts.begin(), hosts.end(), 1) == coarse.k - 1);
    }
  }
}

TEST_CASE("cluster ids follow the smallest contained point") {
  Dataset data = points_1d({10.0, 0.0, 10.1, 0.1});
  HCAConfig cfg;
  cfg.method = Linkage::Single;
  Labeling cut = cut_dendrogram(fit_hca(data, cfg), 2);
  // Point 0 sits in the right-hand pair but must own cluster id 0.
  CHECK(cut.assignments == std::vector<int>{0, 1, 0, 1});
}

TEST_CASE("fit_hca rejects degenerate inputs") {
  Dataset one = points_1d({1.0});
  CHECK_THROWS_AS(fit_hca(one, {}), ValidationError);
  Dataset data = points_1d({0.0, 1.0, 3.0});
  Dendrogram dendro = fit_hca(data, {});
  CHECK_THROWS_AS(cut_dendrogram(dendro, 0), ValidationError);
  CHECK_THROWS_AS(cut_dendrogram(dendro, 4), ValidationError);
}

TEST_CASE("duplicate points keep the merge order deterministic") {
  Dataset data = points_1d({2.0, 2.0, 2.0, 5.0});
  HCAConfig cfg;
  cfg.method = Linkage::Single;
  Dendrogram dendro = fit_hca(data, cfg);
  // All-zero distances tie; smallest pair indexes win, in order.
  CHECK(dendro.merges[0].left == 0);
  CHECK(dendro.merges[0].right == 1);
  CHECK(dendro.merges[1].left == 2);
  CHECK(dendro.merges[1].right == 4);
}
