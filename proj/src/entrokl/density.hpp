#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "entrokl/rng.hpp"
#include "entrokl/sample_set.hpp"

namespace entrokl {

enum class DensityFamily { gaussian, uniform_box, exponential };
enum class SupportKind { all_space, box, half_line };

const char* density_family_name(DensityFamily family);

// One of the analytic ground-truth families: Gaussian (any d), uniform box
// (any d), exponential (d = 1). Evaluatable, exactly sampleable, with
// closed-form entropy and, where available, closed-form ball mass.
// Immutable after construction and safe to share across threads.
class AnalyticDensity {
 public:
  static AnalyticDensity gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);
  static AnalyticDensity uniform_box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static AnalyticDensity exponential(double rate);

  // Parses {"family":"gaussian","mean":[...],"cov":[[...]]} |
  // {"family":"uniform_box","lower":[...],"upper":[...]} |
  // {"family":"exponential","rate":x}. Throws ParseError naming the
  // offending field.
  static AnalyticDensity from_json(const std::string& text);

  // Canonical re-emission of the spec above (17 significant digits).
  std::string to_json() const;

  DensityFamily family() const { return family_; }
  int dim() const { return dim_; }
  SupportKind support() const { return support_; }

  double pdf(std::span<const double> x) const;
  bool in_support(std::span<const double> x) const;

  // Distance from x to the support boundary along the tightest axis;
  // +infinity for all-space support. Used to pick interior probe points.
  double support_margin(std::span<const double> x) const;

  // Exact i.i.d. sampling, n >= 2. Deterministic given seed.
  SampleSet sample(std::int64_t n, std::uint64_t seed, std::string tag = "") const;

  // Low-level row sampler for Monte Carlo loops (n >= 1 allowed); `out`
  // must hold dim() doubles.
  void draw_point(SplitRng& rng, double* out) const;

  // Closed-form differential entropy in nats.
  double analytic_entropy() const;

  // Exact mass of the ball B(x, r) when a closed form exists, otherwise
  // nullopt (callers fall back to Monte Carlo). Absence is a value, not an
  // error.
  std::optional<double> ball_mass_exact(std::span<const double> x, double r) const;

  // Smallest covariance eigenvalue; Gaussian only.
  double lambda_min() const;

  // Parameter accessors (valid for the matching family).
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  double rate() const { return rate_; }

 private:
  AnalyticDensity() = default;

  DensityFamily family_ = DensityFamily::gaussian;
  SupportKind support_ = SupportKind::all_space;
  int dim_ = 1;

  // Gaussian state
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_lower_;
  double log_norm_ = 0.0;  // -(d/2) log(2 pi) - (1/2) log det
  double log_det_cov_ = 0.0;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;

  // Uniform box state
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  double box_volume_ = 0.0;

  // Exponential state
  double rate_ = 0.0;
};

}  // namespace entrokl
