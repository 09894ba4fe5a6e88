#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <set>

#include "kvote/dataset.hpp"
#include "kvote/error.hpp"

using namespace kvote;

namespace {

BlobSpec paper_blobs(std::uint64_t seed) {
  BlobSpec spec;
  spec.n_samples = 30000;
  spec.n_centers = 3;
  spec.n_features = 2;
  spec.box_low = -5.0;
  spec.box_high = 5.0;
  spec.cluster_std = 1.0;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generate_blobs matches the reference setup") {
  Dataset data = generate_blobs(paper_blobs(7), "paper");
  CHECK(data.n() == 30000);
  CHECK(data.dim() == 2);
  REQUIRE(data.labels.has_value());
  std::vector<int> counts(3, 0);
  for (int l : *data.labels) ++counts[static_cast<std::size_t>(l)];
  CHECK(counts == std::vector<int>{10000, 10000, 10000});
  CHECK(data.true_k() == 3);
  data.validate();
}

TEST_CASE("generate_blobs splits evenly with one point per cluster") {
  BlobSpec spec = paper_blobs(1);
  spec.n_samples = 3;
  Dataset data = generate_blobs(spec);
  std::vector<int> counts(3, 0);
  for (int l : *data.labels) ++counts[static_cast<std::size_t>(l)];
  CHECK(counts == std::vector<int>{1, 1, 1});

  spec.n_samples = 8;  // remainder goes to the earliest centers
  data = generate_blobs(spec);
  counts.assign(3, 0);
  for (int l : *data.labels) ++counts[static_cast<std::size_t>(l)];
  CHECK(counts == std::vector<int>{3, 3, 2});
}

TEST_CASE("generate_blobs noise has the configured scale") {
  BlobSpec spec = paper_blobs(123);
  spec.n_samples = 10000;
  spec.n_centers = 1;
  Dataset data = generate_blobs(spec);
  for (Eigen::Index f = 0; f < 2; ++f) {
    const double mean = data.points.col(f).mean();
    const double var = (data.points.col(f).array() - mean).square().sum() / (data.n() - 1);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 0.03);
  }
}

TEST_CASE("generate_blobs is bitwise deterministic in the seed") {
  Dataset a = generate_blobs(paper_blobs(42));
  Dataset b = generate_blobs(paper_blobs(42));
  CHECK(a.points == b.points);
  CHECK(*a.labels == *b.labels);
  Dataset c = generate_blobs(paper_blobs(43));
  CHECK(a.points != c.points);
}

TEST_CASE("generate_blobs rejects bad specs") {
  BlobSpec spec = paper_blobs(0);
  spec.n_samples = 2;
  CHECK_THROWS_AS(generate_blobs(spec), ValidationError);
  spec = paper_blobs(0);
  spec.cluster_std = 0.0;
  CHECK_THROWS_AS(generate_blobs(spec), ValidationError);
  spec = paper_blobs(0);
  spec.box_low = 5.0;
  spec.box_high = -5.0;
  CHECK_THROWS_AS(generate_blobs(spec), ValidationError);
}

TEST_CASE("split_subsets partitions the dataset") {
  BlobSpec spec = paper_blobs(5);
  spec.n_samples = 100;
  Dataset data = generate_blobs(spec);

  SUBCASE("forced singleton partition") {
    auto subsets = split_subsets(data, 100, 9);
    CHECK(subsets.size() == 100);
    for (const auto& s : subsets) CHECK(s.n() == 1);
  }
  SUBCASE("near-equal sizes") {
    spec.n_samples = 10;
    Dataset small = generate_blobs(spec);
    auto subsets = split_subsets(small, 3, 9);
    std::vector<Eigen::Index> sizes;
    for (const auto& s : subsets) sizes.push_back(s.n());
    CHECK(sizes == std::vector<Eigen::Index>{4, 3, 3});
  }
  SUBCASE("single subset is the input up to order") {
    auto subsets = split_subsets(data, 1, 9);
    REQUIRE(subsets.size() == 1);
    CHECK(subsets[0].n() == data.n());
    // Rows were reordered by a permutation; multiset of coordinates matches.
    std::multiset<double> a(data.points.data(), data.points.data() + data.points.size());
    std::multiset<double> b(subsets[0].points.data(),
                            subsets[0].points.data() + subsets[0].points.size());
    CHECK(a == b);
  }
  SUBCASE("union of subset rows covers every input row") {
    auto subsets = split_subsets(data, 7, 11);
    std::multiset<double> seen;
    Eigen::Index total = 0;
    for (const auto& s : subsets) {
      total += s.n();
      for (Eigen::Index i = 0; i < s.n(); ++i) seen.insert(s.points(i, 0));
    }
    CHECK(total == data.n());
    std::multiset<double> expected(data.points.col(0).data(),
                                   data.points.col(0).data() + data.n());
    CHECK(seen == expected);
  }
  SUBCASE("more subsets than points is an error") {
    spec.n_samples = 5;
    Dataset tiny = generate_blobs(spec);
    CHECK_THROWS_AS(split_subsets(tiny, 6, 0), ValidationError);
  }
}

TEST_CASE("subsample caps the dataset") {
  BlobSpec spec = paper_blobs(11);
  spec.n_samples = 500;
  Dataset data = generate_blobs(spec);

  SUBCASE("no-op below the cap") {
    Dataset same = subsample(data, 1000, 1);
    CHECK(same.points == data.points);
  }
  SUBCASE("samples without replacement") {
    spec.n_samples = 30000;
    Dataset big = generate_blobs(spec);
    Dataset sub = subsample(big, 2000, 1);
    CHECK(sub.n() == 2000);
    std::set<double> firsts(sub.points.col(0).data(), sub.points.col(0).data() + sub.n());
    CHECK(firsts.size() == 2000);  // rows are distinct originals
  }
  SUBCASE("rows come from the input") {
    Dataset sub = subsample(data, 50, 3);
    std::set<double> pool(data.points.col(0).data(), data.points.col(0).data() + data.n());
    for (Eigen::Index i = 0; i < sub.n(); ++i) CHECK(pool.count(sub.points(i, 0)) == 1);
  }
  SUBCASE("balanced labels stay near-balanced over many seeds") {
    spec.n_samples = 30000;
    Dataset big = generate_blobs(spec);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Dataset sub = subsample(big, 3000, seed);
      std::vector<int> counts(3, 0);
      for (int l : *sub.labels) ++counts[static_cast<std::size_t>(l)];
      for (int c : counts) {
        const double share = static_cast<double>(c) / 3000.0;
        CHECK(std::abs(share - 1.0 / 3.0) < 0.03);
      }
    }
  }
  SUBCASE("zero cap is an error") { CHECK_THROWS_AS(subsample(data, 0, 1), ValidationError); }
}

TEST_CASE("CSV round trip preserves points and labels") {
  BlobSpec spec = paper_blobs(21);
  spec.n_samples = 64;
  spec.n_features = 3;
  Dataset data = generate_blobs(spec, "roundtrip");

  const std::string path = std::filesystem::temp_directory_path() / "kvote_test_roundtrip.csv";
  save_csv(data, path);
  Dataset loaded = load_csv(path);
  CHECK(loaded.id == "kvote_test_roundtrip");
  CHECK(loaded.points == data.points);
  REQUIRE(loaded.labels.has_value());
  CHECK(*loaded.labels == *data.labels);

  // Unlabeled datasets omit the label column.
  data.labels.reset();
  save_csv(data, path);
  loaded = load_csv(path);
  CHECK_FALSE(loaded.labels.has_value());
  CHECK(loaded.points == data.points);
  std::filesystem::remove(path);
}
