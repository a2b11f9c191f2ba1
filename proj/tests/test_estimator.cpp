#include <doctest.h>

#include <cmath>
#include <vector>

#include "entrokl/constants.hpp"
#include "entrokl/density.hpp"
#include "entrokl/estimator.hpp"
#include "entrokl/numeric.hpp"
#include "test_support.hpp"

using namespace entrokl;

namespace {

SampleSet from_rows(std::vector<double> pts, std::int64_t n, int dim) {
  return SampleSet(std::move(pts), n, dim, "test");
}

EntropyEstimate estimate_of(const SampleSet& sample, NnMethod method = NnMethod::tree) {
  return kl_entropy(sample, nn_distances(sample, method));
}

}  // namespace

TEST_CASE("two unit-spaced points: H_2 = log 2 + gamma") {
  const auto est = estimate_of(from_rows({0.0, 1.0}, 2, 1));
  const double expected = std::log(2.0) + kEulerGamma;  // 1.2703628454614782
  CHECK(est.h_n == doctest::Approx(expected).epsilon(1e-14));
  CHECK(est.h_n == doctest::Approx(1.2703628).epsilon(1e-7));
  CHECK(est.log_rho_bar == 0.0);
  CHECK(est.n == 2);
  CHECK(est.dim == 1);
}

TEST_CASE("three points {0,1,3}: H_3 = (7/3) log 2 + gamma") {
  const auto est = estimate_of(from_rows({0.0, 1.0, 3.0}, 3, 1));
  // rho = (1,1,2); d log rho_bar = (1/3) log 2, V_1 = 2, N-1 = 2.
  const double expected = (7.0 / 3.0) * std::log(2.0) + kEulerGamma;  // 2.1945590862
  CHECK(est.h_n == doctest::Approx(expected).epsilon(1e-14));
  CHECK(est.log_rho_bar == doctest::Approx(std::log(2.0) / 3.0).epsilon(1e-14));
}

TEST_CASE("coincident points raise DuplicatePointsError") {
  const auto sample = from_rows({0.0, 0.0}, 2, 1);
  const auto nn = nn_distances_tree(sample);
  CHECK_THROWS_AS(kl_entropy(sample, nn), DuplicatePointsError);
  try {
    kl_entropy(sample, nn);
  } catch (const DuplicatePointsError& e) {
    REQUIRE(e.duplicate_indices().size() == 1);
    CHECK(e.duplicate_indices()[0] == IndexPair{0, 1});
  }
}

TEST_CASE("decomposition: h_n equals both the formula and mean(zeta)") {
  SplitRng rng(201);
  const auto sample = test_support::random_sample(rng, 200, 3);
  const auto est = estimate_of(sample);

  CHECK(est.zeta.size() == 200);
  CHECK(est.h_n == doctest::Approx(pairwise_mean(est.zeta)).epsilon(1e-10));

  const double formula = est.dim * est.log_rho_bar +
                         std::log(unit_ball_volume(est.dim)) + kEulerGamma +
                         std::log(199.0);
  CHECK(est.h_n == doctest::Approx(formula).epsilon(1e-10));
}

TEST_CASE("scaling law: H(sX) = H(X) + d log s") {
  const auto density = AnalyticDensity::gaussian(Eigen::Vector2d(0.0, 0.0),
                                                 Eigen::Matrix2d::Identity());
  const auto sample = density.sample(300, 777);
  const double base = estimate_of(sample).h_n;
  for (double s : {0.1, 3.7, 120.0}) {
    std::vector<double> scaled(sample.points());
    for (double& v : scaled) v *= s;
    const double h = estimate_of(from_rows(std::move(scaled), 300, 2)).h_n;
    CHECK(h - base == doctest::Approx(2.0 * std::log(s)).epsilon(1e-9));
  }
}

TEST_CASE("rigid motions leave the estimate unchanged") {
  SplitRng rng(202);
  const auto sample = test_support::random_sample(rng, 150, 3, -1.0, 1.0);
  const double base = estimate_of(sample).h_n;

  const Eigen::MatrixXd rot = test_support::random_rotation(rng, 3);
  std::vector<double> moved(sample.points().size());
  for (std::int64_t i = 0; i < 150; ++i) {
    Eigen::Map<const Eigen::Vector3d> row(sample.points().data() + i * 3);
    Eigen::Map<Eigen::Vector3d> out(moved.data() + i * 3);
    out = rot * row + Eigen::Vector3d(4.0, -2.0, 9.0);
  }
  const double h = estimate_of(from_rows(std::move(moved), 150, 3)).h_n;
  CHECK(h == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("estimate is independent of the NN backend") {
  SplitRng rng(203);
  const auto sample = test_support::random_sample(rng, 400, 2);
  const double brute = estimate_of(sample, NnMethod::brute).h_n;
  const double tree = estimate_of(sample, NnMethod::tree).h_n;
  CHECK(brute == doctest::Approx(tree).epsilon(1e-9));
}

TEST_CASE("jitter: zero scale with duplicates is still an error") {
  CHECK_THROWS_AS(kl_entropy_with_jitter(from_rows({0.0, 0.0}, 2, 1), 0.0, 1),
                  DuplicatePointsError);
}

TEST_CASE("jitter: resolves duplicates and reports the count") {
  const auto sample = from_rows({0.0, 0.0, 1.0}, 3, 1);
  const auto result = kl_entropy_with_jitter(sample, 1e-9, 42);
  CHECK(std::isfinite(result.estimate.h_n));
  CHECK(std::fabs(result.estimate.h_n) < 50.0);
  CHECK(result.duplicates_handled == 1);
  CHECK(result.estimate.method == NnMethod::tree);

  // Deterministic given the seed.
  const auto again = kl_entropy_with_jitter(sample, 1e-9, 42);
  CHECK(again.estimate.h_n == result.estimate.h_n);
  const auto other = kl_entropy_with_jitter(sample, 1e-9, 43);
  CHECK(other.estimate.h_n != result.estimate.h_n);
}

TEST_CASE("jitter: zero scale on clean data is the plain estimate") {
  SplitRng rng(204);
  const auto sample = test_support::random_sample(rng, 50, 2);
  const auto plain = estimate_of(sample);
  const auto jittered = kl_entropy_with_jitter(sample, 0.0, 9);
  CHECK(jittered.estimate.h_n == plain.h_n);
  CHECK(jittered.duplicates_handled == 0);
}

TEST_CASE("jitter records itself in the provenance tag") {
  const auto sample = from_rows({0.0, 0.0, 1.0}, 3, 1);
  const auto result = kl_entropy_with_jitter(sample, 1e-6, 5);
  CHECK(result.source_tag.find("jitter") != std::string::npos);
  CHECK(result.source_tag.find("seed=5") != std::string::npos);

  const auto untouched = kl_entropy_with_jitter(
      from_rows({0.0, 1.0}, 2, 1), 0.0, 5);
  CHECK(untouched.source_tag.find("jitter") == std::string::npos);
}
