#include <doctest.h>

#include <cmath>
#include <random>

#include "kvote/error.hpp"
#include "kvote/kmeans.hpp"
#include "kvote/metrics.hpp"

using namespace kvote;

namespace {

Dataset points_1d(const std::vector<double>& xs) {
  Dataset d;
  d.id = "1d";
  d.points.resize(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) d.points(static_cast<Eigen::Index>(i), 0) = xs[i];
  return d;
}

Labeling labeling_of(std::vector<int> assignments) {
  return Labeling::from_assignments(std::move(assignments));
}

// Naive silhouette: per-point loops straight from the definition.
double silhouette_oracle(const Matrix& X, const Labeling& lab) {
  const Eigen::Index n = X.rows();
  auto sizes = lab.cluster_sizes();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = lab.assignments[static_cast<std::size_t>(i)];
    if (sizes[static_cast<std::size_t>(own)] <= 1) continue;
    double a = 0.0;
    std::vector<double> sums(sizes.size(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      sums[static_cast<std::size_t>(lab.assignments[static_cast<std::size_t>(j)])] +=
          (X.row(i) - X.row(j)).norm();
    }
    a = sums[static_cast<std::size_t>(own)] / (sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < sizes.size(); ++c)
      if (static_cast<int>(c) != own) b = std::min(b, sums[c] / sizes[c]);
    if (std::max(a, b) > 0) total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(n);
}

Dataset blobs(int n, std::uint64_t seed, int centers = 3) {
  BlobSpec spec;
  spec.n_samples = n;
  spec.n_centers = centers;
  spec.n_features = 2;
  spec.seed = seed;
  return generate_blobs(spec);
}

}  // namespace

TEST_CASE("inertia hand cases") {
  Dataset same = points_1d({4.0, 4.0, 4.0});
  CHECK(inertia(same, labeling_of({0, 0, 0})) == 0.0);

  Dataset pair = points_1d({0.0, 2.0});
  CHECK(inertia(pair, labeling_of({0, 0})) == doctest::Approx(2.0));

  Dataset three = points_1d({0.0, 5.0, 9.0});
  CHECK(inertia(three, labeling_of({0, 1, 2})) == 0.0);  // singletons
}

TEST_CASE("silhouette matches the worked two-pair example") {
  Dataset data = points_1d({0.0, 1.0, 10.0, 11.0});
  const double expected = (2.0 * (9.5 / 10.5) + 2.0 * (8.5 / 9.5)) / 4.0;
  const double got = silhouette(data, labeling_of({0, 0, 1, 1}), 1000, 1);
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.8997).epsilon(1e-3));
}

TEST_CASE("interleaved identical clusters score non-positive") {
  Dataset data = points_1d({0.0, 0.0, 1.0, 1.0, 2.0, 2.0});
  CHECK(silhouette(data, labeling_of({0, 1, 0, 1, 0, 1}), 1000, 1) <= 0.0);
}

TEST_CASE("silhouette stays within [-1, 1] on random labelings") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Dataset data = blobs(60, trial);
    std::uniform_int_distribution<int> lab(0, 3);
    std::vector<int> assign(60);
    for (auto& a : assign) a = lab(rng);
    Labeling labeling = labeling_of(std::move(assign));
    if (labeling.k < 2) continue;
    const double s = silhouette(data, labeling, 1000, 1);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("uncapped silhouette equals the direct pairwise oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 40 + static_cast<int>(rng() % 160);
    Dataset data = blobs(n, trial + 100);
    std::uniform_int_distribution<int> lab(0, 4);
    std::vector<int> assign(static_cast<std::size_t>(n));
    for (auto& a : assign) a = lab(rng);
    Labeling labeling = labeling_of(std::move(assign));
    if (labeling.k < 2) continue;
    const double fast = silhouette(data, labeling, n + 10, 1);
    const double slow = silhouette_oracle(data.points, labeling);
    CHECK(std::abs(fast - slow) <= 1e-10);
  }
}

TEST_CASE("capped silhouette is deterministic and stratified") {
  Dataset data = blobs(5000, 42);
  Labeling truth = labeling_of(std::vector<int>(data.labels->begin(), data.labels->end()));
  const double a = silhouette(data, truth, 500, 9);
  const double b = silhouette(data, truth, 500, 9);
  CHECK(a == b);
  CHECK(a >= -1.0);
  CHECK(a <= 1.0);
}

TEST_CASE("silhouette requires at least two clusters") {
  Dataset data = points_1d({0.0, 1.0, 2.0});
  CHECK_THROWS_AS(silhouette(data, labeling_of({0, 0, 0}), 100, 1), ValidationError);
}

TEST_CASE("information criterion parameter counts") {
  CHECK(free_parameters(CovarianceType::Diag, 3, 2) == 14);
  CHECK(free_parameters(CovarianceType::Spherical, 1, 2) == 3);
  CHECK(free_parameters(CovarianceType::Tied, 2, 3) == 13);  // 6 + 6 + 1
  CHECK(free_parameters_kmeans(3, 2) == 9);
}

TEST_CASE("BIC dominates AIC once n >= 8") {
  Dataset data = blobs(500, 3);
  KMeansResult fit = fit_kmeans(data, 3, {}, 1);
  auto model = kmeans_log_likelihood(data, fit.labeling);
  const double aic = information_criterion(Criterion::Aic, model, data.n(), 2);
  const double bic = information_criterion(Criterion::Bic, model, data.n(), 2);
  CHECK(bic >= aic);
}

TEST_CASE("information criterion increases with parameter count at fixed likelihood") {
  SphericalLikelihood small{-100.0, 2};
  SphericalLikelihood big{-100.0, 5};
  CHECK(information_criterion(Criterion::Aic, big, 100, 2) >
        information_criterion(Criterion::Aic, small, 100, 2));
  CHECK(information_criterion(Criterion::Bic, big, 100, 2) >
        information_criterion(Criterion::Bic, small, 100, 2));
}

TEST_CASE("metric_curve has one point per candidate k") {
  Dataset data = blobs(400, 11);
  HyperSelection hyper{{{"init", "k-means++"}, {"reassignment_ratio", "0.001"}}};
  MetricCurve curve = metric_curve(data, Algorithm::KMeans, hyper, MetricId::Inertia, 2, 10, 3);
  CHECK(curve.k_values.size() == 9);
  CHECK(curve.k_values.front() == 2);
  CHECK(curve.k_values.back() == 10);
  curve.validate();
}

TEST_CASE("k-means inertia curves decrease up to restart noise") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Dataset data = blobs(1500, seed + 50);
    HyperSelection hyper{{{"init", "k-means++"}, {"reassignment_ratio", "0.0001"}}};
    MetricCurve curve = metric_curve(data, Algorithm::KMeans, hyper, MetricId::Inertia, 2, 8, seed);
    for (std::size_t i = 1; i < curve.scores.size(); ++i)
      CHECK(curve.scores[i] <= curve.scores[i - 1] * 1.05);
  }
}

TEST_CASE("metric curves are pure functions of their seed") {
  Dataset data = blobs(300, 21);
  HyperSelection hyper{{{"covariance_type", "diag"}, {"reg_covar", "1e-6"}}};
  MetricCurve a = metric_curve(data, Algorithm::Gmm, hyper, MetricId::Aic, 2, 6, 5);
  MetricCurve b = metric_curve(data, Algorithm::Gmm, hyper, MetricId::Aic, 2, 6, 5);
  CHECK(a.scores == b.scores);
}

TEST_CASE("single-metric and multi-metric evaluation share clusterings") {
  Dataset data = blobs(300, 31);
  HyperSelection hyper{{{"method", "ward"}, {"metric", "euclidean"}}};
  auto all = evaluate_hyper(data, Algorithm::Hca, hyper,
                            {MetricId::Elbow, MetricId::Inertia, MetricId::Silhouette, MetricId::MaxDiff},
                            2, 8, 7, 1000);
  auto solo = evaluate_hyper(data, Algorithm::Hca, hyper, {MetricId::Inertia}, 2, 8, 7, 1000);
  REQUIRE(all.size() == 4);
  CHECK(all[1].curve.scores == solo[0].curve.scores);
  CHECK(all[1].guessed_k == solo[0].guessed_k);
}

TEST_CASE("dendrogram estimators read merge heights top-down") {
  // Chain 0,1,2,3,12: single linkage merges at heights 1,1,1,9.
  Dataset data = points_1d({0.0, 1.0, 2.0, 3.0, 12.0});
  HCAConfig cfg;
  cfg.method = Linkage::Single;
  Dendrogram dendro = fit_hca(data, cfg);
  CHECK(dendro.height_at(1) == doctest::Approx(9.0));
  CHECK(dendro.height_at(2) == doctest::Approx(1.0));
  CHECK(estimate_k_from_dendrogram(dendro, DendrogramEstimator::MaxDiff, 2, 4) == 2);

  // All-equal heights: the tie-break returns the range minimum.
  Dataset chain = points_1d({0.0, 1.0, 2.0, 3.0, 4.0});
  Dendrogram flat = fit_hca(chain, cfg);
  CHECK(estimate_k_from_dendrogram(flat, DendrogramEstimator::MaxDiff, 2, 4) == 2);

  // Linearly decaying heights: the triangle method ties at zero distance
  // and returns the smallest interior k.
  Dataset decaying = points_1d({0.0, 1.0, 3.0, 6.0, 10.0});
  Dendrogram lin = fit_hca(decaying, cfg);
  CHECK(dendro.n - 1 == 4);
  CHECK(estimate_k_from_dendrogram(lin, DendrogramEstimator::Elbow, 2, 4) == 3);

  CHECK_THROWS_AS(estimate_k_from_dendrogram(dendro, DendrogramEstimator::MaxDiff, 2, 5),
                  ValidationError);
}
