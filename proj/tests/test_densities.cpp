#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "entrokl/density.hpp"
#include "entrokl/errors.hpp"
#include "entrokl/numeric.hpp"
#include "test_support.hpp"

using namespace entrokl;

namespace {

AnalyticDensity standard_normal_1d() {
  return AnalyticDensity::gaussian(Eigen::VectorXd::Zero(1),
                                   Eigen::MatrixXd::Identity(1, 1));
}

AnalyticDensity unit_box_1d() {
  Eigen::VectorXd lo(1), hi(1);
  lo << 0.0;
  hi << 1.0;
  return AnalyticDensity::uniform_box(lo, hi);
}

// Composite Simpson on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("pdf values") {
  const auto normal = standard_normal_1d();
  const double x0 = 0.0;
  CHECK(normal.pdf({&x0, 1}) == doctest::Approx(0.3989422804014327).epsilon(1e-12));

  const auto box = unit_box_1d();
  const double half = 0.5, two = 2.0;
  CHECK(box.pdf({&half, 1}) == 1.0);
  CHECK(box.pdf({&two, 1}) == 0.0);

  const auto expo = AnalyticDensity::exponential(1.0);
  const double neg = -0.5;
  CHECK(expo.pdf({&neg, 1}) == 0.0);
  CHECK(expo.pdf({&x0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("pdf rejects dimension mismatch") {
  const auto normal = standard_normal_1d();
  const double xy[2] = {0.0, 0.0};
  CHECK_THROWS_AS(normal.pdf({xy, 2}), std::invalid_argument);
}

TEST_CASE("gaussian validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 0.5, 0.3, 1.0;  // not symmetric
  CHECK_THROWS_AS(AnalyticDensity::gaussian(Eigen::VectorXd::Zero(2), bad),
                  std::invalid_argument);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(AnalyticDensity::gaussian(Eigen::VectorXd::Zero(2), indefinite),
                  std::invalid_argument);

  Eigen::MatrixXd near_singular(2, 2);
  near_singular << 1.0, 0.0, 0.0, 1e-14;
  CHECK_THROWS_AS(AnalyticDensity::gaussian(Eigen::VectorXd::Zero(2), near_singular),
                  std::invalid_argument);
}

TEST_CASE("uniform box and exponential validation") {
  Eigen::VectorXd lo(1), hi(1);
  lo << 1.0;
  hi << 1.0;
  CHECK_THROWS_AS(AnalyticDensity::uniform_box(lo, hi), std::invalid_argument);
  CHECK_THROWS_AS(AnalyticDensity::exponential(0.0), std::invalid_argument);
  CHECK_THROWS_AS(AnalyticDensity::exponential(-1.0), std::invalid_argument);
}

TEST_CASE("sampling: moments, support, determinism") {
  Eigen::VectorXd mean(2);
  mean << 3.0, -1.0;
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.3, 0.3, 0.5;
  const auto gauss = AnalyticDensity::gaussian(mean, cov);

  const auto sample = gauss.sample(10000, 5);
  for (int k = 0; k < 2; ++k) {
    std::vector<double> coord(10000);
    for (std::int64_t i = 0; i < 10000; ++i) coord[i] = sample.points()[i * 2 + k];
    const double sigma = std::sqrt(cov(k, k));
    CHECK(std::fabs(pairwise_mean(coord) - mean[k]) <= 4.0 * sigma / 100.0);
  }

  const auto box = unit_box_1d().sample(10000, 6);
  for (double v : box.points()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  const auto a = gauss.sample(100, 9);
  const auto b = gauss.sample(100, 9);
  CHECK(a.points() == b.points());

  CHECK_THROWS_AS(gauss.sample(1, 0), std::invalid_argument);
}

TEST_CASE("analytic entropies") {
  CHECK(standard_normal_1d().analytic_entropy() ==
        doctest::Approx(1.4189385332046727).epsilon(1e-12));

  Eigen::VectorXd lo(3), hi(3);
  lo << 0.0, 0.0, 0.0;
  hi << 1.0, 1.0, 1.0;
  CHECK(AnalyticDensity::uniform_box(lo, hi).analytic_entropy() ==
        doctest::Approx(0.0));

  CHECK(AnalyticDensity::exponential(1.0).analytic_entropy() == doctest::Approx(1.0));
  CHECK(AnalyticDensity::exponential(2.0).analytic_entropy() ==
        doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("closed-form entropy matches quadrature of -f log f") {
  // Gaussian, d = 1, over [mean - 10 sigma, mean + 10 sigma].
  for (double sigma2 : {0.25, 1.0, 4.0}) {
    Eigen::VectorXd mean(1);
    mean << 0.7;
    Eigen::MatrixXd cov(1, 1);
    cov << sigma2;
    const auto gauss = AnalyticDensity::gaussian(mean, cov);
    const double sigma = std::sqrt(sigma2);
    const double numeric = simpson(
        [&](double x) {
          const double f = gauss.pdf({&x, 1});
          return f > 0.0 ? -f * std::log(f) : 0.0;
        },
        0.7 - 10.0 * sigma, 0.7 + 10.0 * sigma, 4000);
    CHECK(numeric == doctest::Approx(gauss.analytic_entropy()).epsilon(1e-8));
  }

  // Exponential via quadrature on [0, 50 / rate].
  for (double rate : {0.5, 1.0, 3.0}) {
    const auto expo = AnalyticDensity::exponential(rate);
    const double numeric = simpson(
        [&](double x) {
          const double f = expo.pdf({&x, 1});
          return f > 0.0 ? -f * std::log(f) : 0.0;
        },
        0.0, 50.0 / rate, 20000);
    CHECK(numeric == doctest::Approx(expo.analytic_entropy()).epsilon(1e-8));
  }
}

TEST_CASE("exact ball masses") {
  const auto normal = standard_normal_1d();
  const double zero = 0.0;
  auto mass = normal.ball_mass_exact({&zero, 1}, 1.0);
  REQUIRE(mass.has_value());
  CHECK(*mass == doctest::Approx(0.6826894921370859).epsilon(1e-10));

  const auto box = unit_box_1d();
  const double half = 0.5;
  CHECK(*box.ball_mass_exact({&half, 1}, 0.25) == doctest::Approx(0.5));
  CHECK(*box.ball_mass_exact({&zero, 1}, 0.5) == doctest::Approx(0.5));

  // 2-D box: fully-contained ball has mass V_2 r^2 / vol(box).
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 2.0, 2.0;
  const auto box2 = AnalyticDensity::uniform_box(lo, hi);
  const double center[2] = {1.0, 1.0};
  CHECK(*box2.ball_mass_exact({center, 2}, 0.5) ==
        doctest::Approx(M_PI * 0.25 / 4.0).epsilon(1e-12));
  // Separated ball: exact zero.
  const double away[2] = {5.0, 5.0};
  CHECK(*box2.ball_mass_exact({away, 2}, 0.5) == 0.0);
  // Partial overlap in d >= 2 has no closed form here.
  const double edge[2] = {0.1, 1.0};
  CHECK(!box2.ball_mass_exact({edge, 2}, 0.5).has_value());

  // Gaussian d >= 2 has no closed form.
  const auto gauss2 = AnalyticDensity::gaussian(Eigen::VectorXd::Zero(2),
                                                Eigen::MatrixXd::Identity(2, 2));
  CHECK(!gauss2.ball_mass_exact({center, 2}, 1.0).has_value());

  // Exponential interval arithmetic.
  const auto expo = AnalyticDensity::exponential(1.0);
  const double x1 = 1.0;
  CHECK(*expo.ball_mass_exact({&x1, 1}, 0.5) ==
        doctest::Approx(std::exp(-0.5) - std::exp(-1.5)).epsilon(1e-12));
  const double far_left = -3.0;
  CHECK(*expo.ball_mass_exact({&far_left, 1}, 1.0) == 0.0);
}

TEST_CASE("ball mass is nondecreasing in r and saturates at 1") {
  const double zero = 0.0;
  const double half = 0.5;
  const auto normal = standard_normal_1d();
  const auto expo = AnalyticDensity::exponential(2.0);
  const auto box = unit_box_1d();

  double previous = 0.0;
  for (double r = 0.1; r <= 4.0; r += 0.1) {
    const double m = *normal.ball_mass_exact({&zero, 1}, r);
    CHECK(m >= previous - 1e-15);
    previous = m;
  }
  CHECK(*normal.ball_mass_exact({&zero, 1}, 1000.0) >= 1.0 - 1e-6);
  CHECK(*expo.ball_mass_exact({&half, 1}, 1000.0) >= 1.0 - 1e-6);
  CHECK(*box.ball_mass_exact({&half, 1}, 1000.0) >= 1.0 - 1e-6);
}

TEST_CASE("gaussian pdf peaks at the mean") {
  Eigen::VectorXd mean(2);
  mean << 1.0, -2.0;
  Eigen::MatrixXd cov(2, 2);
  cov << 1.5, -0.4, -0.4, 0.8;
  const auto gauss = AnalyticDensity::gaussian(mean, cov);
  const double at_mean = gauss.pdf({mean.data(), 2});
  SplitRng rng(31);
  for (int i = 0; i < 200; ++i) {
    const double x[2] = {mean[0] + rng.uniform(-3.0, 3.0),
                         mean[1] + rng.uniform(-3.0, 3.0)};
    CHECK(gauss.pdf({x, 2}) <= at_mean + 1e-15);
  }
}

TEST_CASE("pdf integrates to one (importance check, 3 standard errors)") {
  SplitRng rng(32);
  const int n = 100000;

  // Gaussian d = 2: uniform proposal over mean +/- 8 sigma per axis.
  Eigen::VectorXd mean(2);
  mean << 0.5, -0.3;
  Eigen::MatrixXd cov(2, 2);
  cov << 1.0, 0.2, 0.2, 0.7;
  const auto gauss = AnalyticDensity::gaussian(mean, cov);
  double volume = 1.0;
  for (int k = 0; k < 2; ++k) volume *= 16.0 * std::sqrt(cov(k, k));
  std::vector<double> values(n);
  for (int i = 0; i < n; ++i) {
    const double x[2] = {mean[0] + 8.0 * std::sqrt(cov(0, 0)) * (2.0 * rng.uniform01() - 1.0),
                         mean[1] + 8.0 * std::sqrt(cov(1, 1)) * (2.0 * rng.uniform01() - 1.0)};
    values[i] = gauss.pdf({x, 2}) * volume;
  }
  CHECK(std::fabs(pairwise_mean(values) - 1.0) <= 3.0 * standard_error(values) + 1e-6);

  // Exponential: proposal over [0, 40 / rate].
  const auto expo = AnalyticDensity::exponential(1.5);
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(0.0, 40.0 / 1.5);
    values[i] = expo.pdf({&x, 1}) * (40.0 / 1.5);
  }
  CHECK(std::fabs(pairwise_mean(values) - 1.0) <= 3.0 * standard_error(values) + 1e-6);
}

TEST_CASE("json parsing: the three families") {
  const auto gauss = AnalyticDensity::from_json(
      R"({"family":"gaussian","mean":[1.0,2.0],"cov":[[2.0,0.1],[0.1,1.0]]})");
  CHECK(gauss.family() == DensityFamily::gaussian);
  CHECK(gauss.dim() == 2);
  CHECK(gauss.mean()[1] == 2.0);

  const auto box = AnalyticDensity::from_json(
      R"({"family":"uniform_box","lower":[0.0],"upper":[1.0]})");
  CHECK(box.family() == DensityFamily::uniform_box);
  CHECK(box.support() == SupportKind::box);

  const auto expo = AnalyticDensity::from_json(R"({"family":"exponential","rate":2.5})");
  CHECK(expo.rate() == 2.5);
  CHECK(expo.support() == SupportKind::half_line);
}

TEST_CASE("json parsing errors name the failing field") {
  CHECK_THROWS_AS(AnalyticDensity::from_json("not json"), ParseError);
  CHECK_THROWS_WITH_AS(
      AnalyticDensity::from_json(R"({"family":"gaussian","cov":[[1.0]]})"),
      doctest::Contains("mean"), ParseError);
  CHECK_THROWS_WITH_AS(
      AnalyticDensity::from_json(R"({"family":"hat"})"),
      doctest::Contains("family"), ParseError);
  CHECK_THROWS_WITH_AS(
      AnalyticDensity::from_json(R"({"family":"exponential","rate":-1.0})"),
      doctest::Contains("rate"), ParseError);
  CHECK_THROWS_WITH_AS(
      AnalyticDensity::from_json(R"({"family":"uniform_box","lower":[1.0],"upper":[0.0]})"),
      doctest::Contains("upper"), ParseError);
}

TEST_CASE("json round trip is stable") {
  const std::string spec =
      R"({"family":"gaussian","mean":[1.0,2.0],"cov":[[2.0,0.1],[0.1,1.0]]})";
  const auto density = AnalyticDensity::from_json(spec);
  const std::string echoed = density.to_json();
  const auto reparsed = AnalyticDensity::from_json(echoed);
  CHECK(reparsed.to_json() == echoed);
}

TEST_CASE("lambda_min is the smallest covariance eigenvalue") {
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.0, 0.0, 0.5;
  const auto gauss = AnalyticDensity::gaussian(Eigen::VectorXd::Zero(2), cov);
  CHECK(gauss.lambda_min() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(unit_box_1d().lambda_min(), std::invalid_argument);
}

TEST_CASE("support margin") {
  const auto box = unit_box_1d();
  const double x = 0.3;
  CHECK(box.support_margin({&x, 1}) == doctest::Approx(0.3));
  const auto expo = AnalyticDensity::exponential(1.0);
  const double y = 0.7;
  CHECK(expo.support_margin({&y, 1}) == doctest::Approx(0.7));
  const auto normal = standard_normal_1d();
  CHECK(std::isinf(normal.support_margin({&x, 1})));
}
