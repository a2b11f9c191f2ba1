#include "entrokl/density.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "entrokl/constants.hpp"
#include "entrokl/errors.hpp"
#include "entrokl/json_writer.hpp"

namespace entrokl {

namespace {

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

constexpr double kSymmetryTol = 1e-12;
constexpr double kConditionFloor = 1e-12;  // reject lambda_min < floor * lambda_max

}  // namespace

const char* density_family_name(DensityFamily family) {
  switch (family) {
    case DensityFamily::gaussian: return "gaussian";
    case DensityFamily::uniform_box: return "uniform_box";
    case DensityFamily::exponential: return "exponential";
  }
  return "?";
}

AnalyticDensity AnalyticDensity::gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  const int d = static_cast<int>(mean.size());
  if (d < 1) throw std::invalid_argument("gaussian: mean must have dimension >= 1");
  if (cov.rows() != d || cov.cols() != d) {
    throw std::invalid_argument("gaussian: cov must be d x d");
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw std::invalid_argument("gaussian: parameters must be finite");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw std::invalid_argument("gaussian: cov is not symmetric");
  }

  Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(sym);
  if (eigen.info() != Eigen::Success) {
    throw std::invalid_argument("gaussian: eigendecomposition failed");
  }
  const double lmin = eigen.eigenvalues().minCoeff();
  const double lmax = eigen.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmin < kConditionFloor * lmax) {
    throw std::invalid_argument("gaussian: cov must be positive definite (nondegenerate)");
  }

  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("gaussian: Cholesky factorization failed");
  }

  AnalyticDensity out;
  out.family_ = DensityFamily::gaussian;
  out.support_ = SupportKind::all_space;
  out.dim_ = d;
  out.mean_ = std::move(mean);
  out.cov_ = std::move(sym);
  out.chol_lower_ = llt.matrixL();
  out.log_det_cov_ = 2.0 * out.chol_lower_.diagonal().array().log().sum();
  out.log_norm_ = -0.5 * d * std::log(2.0 * M_PI) - 0.5 * out.log_det_cov_;
  out.lambda_min_ = lmin;
  out.lambda_max_ = lmax;
  return out;
}

AnalyticDensity AnalyticDensity::uniform_box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  const int d = static_cast<int>(lower.size());
  if (d < 1) throw std::invalid_argument("uniform_box: dimension must be >= 1");
  if (upper.size() != d) throw std::invalid_argument("uniform_box: lower/upper length mismatch");
  if (!lower.allFinite() || !upper.allFinite()) {
    throw std::invalid_argument("uniform_box: bounds must be finite");
  }
  double volume = 1.0;
  for (int k = 0; k < d; ++k) {
    if (!(lower[k] < upper[k])) {
      throw std::invalid_argument("uniform_box: lower[" + std::to_string(k) +
                                  "] must be < upper[" + std::to_string(k) + "]");
    }
    volume *= upper[k] - lower[k];
  }

  AnalyticDensity out;
  out.family_ = DensityFamily::uniform_box;
  out.support_ = SupportKind::box;
  out.dim_ = d;
  out.lower_ = std::move(lower);
  out.upper_ = std::move(upper);
  out.box_volume_ = volume;
  return out;
}

AnalyticDensity AnalyticDensity::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential: rate must be positive and finite");
  }
  AnalyticDensity out;
  out.family_ = DensityFamily::exponential;
  out.support_ = SupportKind::half_line;
  out.dim_ = 1;
  out.rate_ = rate;
  return out;
}

namespace {

nlohmann::json require_field(const nlohmann::json& doc, const char* name) {
  if (!doc.contains(name)) {
    throw ParseError(std::string("density spec: missing field \"") + name + "\"");
  }
  return doc.at(name);
}

Eigen::VectorXd parse_vector(const nlohmann::json& value, const char* name) {
  if (!value.is_array() || value.empty()) {
    throw ParseError(std::string("density spec: field \"") + name +
                     "\" must be a non-empty array of numbers");
  }
  Eigen::VectorXd out(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      throw ParseError(std::string("density spec: field \"") + name +
                       "\" must contain only numbers");
    }
    out[static_cast<Eigen::Index>(i)] = value[i].get<double>();
  }
  return out;
}

Eigen::MatrixXd parse_matrix(const nlohmann::json& value, const char* name) {
  if (!value.is_array() || value.empty()) {
    throw ParseError(std::string("density spec: field \"") + name +
                     "\" must be a non-empty array of rows");
  }
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  Eigen::MatrixXd out;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array()) {
      throw ParseError(std::string("density spec: field \"") + name +
                       "\" row " + std::to_string(i) + " is not an array");
    }
    if (i == 0) {
      cols = value[i].size();
      out.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    }
    if (value[i].size() != cols) {
      throw ParseError(std::string("density spec: field \"") + name +
                       "\" rows have inconsistent lengths");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!value[i][j].is_number()) {
        throw ParseError(std::string("density spec: field \"") + name +
                         "\" must contain only numbers");
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          value[i][j].get<double>();
    }
  }
  return out;
}

}  // namespace

AnalyticDensity AnalyticDensity::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("density spec: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("density spec: top level must be an object");

  const auto family = require_field(doc, "family");
  if (!family.is_string()) throw ParseError("density spec: field \"family\" must be a string");
  const std::string name = family.get<std::string>();

  try {
    if (name == "gaussian") {
      return gaussian(parse_vector(require_field(doc, "mean"), "mean"),
                      parse_matrix(require_field(doc, "cov"), "cov"));
    }
    if (name == "uniform_box") {
      return uniform_box(parse_vector(require_field(doc, "lower"), "lower"),
                         parse_vector(require_field(doc, "upper"), "upper"));
    }
    if (name == "exponential") {
      const auto rate = require_field(doc, "rate");
      if (!rate.is_number()) throw ParseError("density spec: field \"rate\" must be a number");
      return exponential(rate.get<double>());
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("density spec: ") + e.what());
  }
  throw ParseError("density spec: unknown family \"" + name + "\"");
}

std::string AnalyticDensity::to_json() const {
  JsonWriter w;
  w.begin_object();
  w.key("family").value(std::string_view(density_family_name(family_)));
  switch (family_) {
    case DensityFamily::gaussian: {
      w.key("mean").begin_array();
      for (int k = 0; k < dim_; ++k) w.value(mean_[k]);
      w.end_array();
      w.key("cov").begin_array();
      for (int i = 0; i < dim_; ++i) {
        w.begin_array();
        for (int j = 0; j < dim_; ++j) w.value(cov_(i, j));
        w.end_array();
      }
      w.end_array();
      break;
    }
    case DensityFamily::uniform_box: {
      w.key("lower").begin_array();
      for (int k = 0; k < dim_; ++k) w.value(lower_[k]);
      w.end_array();
      w.key("upper").begin_array();
      for (int k = 0; k < dim_; ++k) w.value(upper_[k]);
      w.end_array();
      break;
    }
    case DensityFamily::exponential:
      w.key("rate").value(rate_);
      break;
  }
  w.end_object();
  return w.str();
}

double AnalyticDensity::pdf(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("pdf: point dimension mismatch");
  }
  switch (family_) {
    case DensityFamily::gaussian: {
      Eigen::Map<const Eigen::VectorXd> xv(x.data(), dim_);
      Eigen::VectorXd centered = xv - mean_;
      // Solve L y = (x - mean); quadratic form is |y|^2.
      Eigen::VectorXd y =
          chol_lower_.triangularView<Eigen::Lower>().solve(centered);
      return std::exp(log_norm_ - 0.5 * y.squaredNorm());
    }
    case DensityFamily::uniform_box: {
      for (int k = 0; k < dim_; ++k) {
        if (x[k] < lower_[k] || x[k] > upper_[k]) return 0.0;
      }
      return 1.0 / box_volume_;
    }
    case DensityFamily::exponential:
      return x[0] < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x[0]);
  }
  return 0.0;
}

bool AnalyticDensity::in_support(std::span<const double> x) const {
  return pdf(x) > 0.0;
}

double AnalyticDensity::support_margin(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("support_margin: point dimension mismatch");
  }
  switch (family_) {
    case DensityFamily::gaussian:
      return std::numeric_limits<double>::infinity();
    case DensityFamily::uniform_box: {
      double margin = std::numeric_limits<double>::infinity();
      for (int k = 0; k < dim_; ++k) {
        margin = std::min(margin, std::min(x[k] - lower_[k], upper_[k] - x[k]));
      }
      return margin;
    }
    case DensityFamily::exponential:
      return x[0];
  }
  return 0.0;
}

void AnalyticDensity::draw_point(SplitRng& rng, double* out) const {
  switch (family_) {
    case DensityFamily::gaussian: {
      Eigen::VectorXd z(dim_);
      for (int k = 0; k < dim_; ++k) z[k] = rng.normal();
      Eigen::Map<Eigen::VectorXd> xv(out, dim_);
      xv = mean_ + chol_lower_ * z;
      return;
    }
    case DensityFamily::uniform_box:
      for (int k = 0; k < dim_; ++k) out[k] = rng.uniform(lower_[k], upper_[k]);
      return;
    case DensityFamily::exponential:
      out[0] = rng.exponential(rate_);
      return;
  }
}

SampleSet AnalyticDensity::sample(std::int64_t n, std::uint64_t seed,
                                  std::string tag) const {
  if (n < 2) throw std::invalid_argument("sample: need n >= 2");
  std::vector<double> points(static_cast<std::size_t>(n) * static_cast<std::size_t>(dim_));
  SplitRng rng(seed);
  for (std::int64_t i = 0; i < n; ++i) {
    draw_point(rng, points.data() + i * dim_);
  }
  if (tag.empty()) {
    tag = std::string(density_family_name(family_)) + ":n=" + std::to_string(n) +
          ":seed=" + std::to_string(seed);
  }
  return SampleSet(std::move(points), n, dim_, std::move(tag));
}

double AnalyticDensity::analytic_entropy() const {
  switch (family_) {
    case DensityFamily::gaussian:
      return 0.5 * (dim_ * std::log(2.0 * M_PI * M_E) + log_det_cov_);
    case DensityFamily::uniform_box:
      return std::log(box_volume_);
    case DensityFamily::exponential:
      return 1.0 - std::log(rate_);
  }
  return 0.0;
}

std::optional<double> AnalyticDensity::ball_mass_exact(std::span<const double> x,
                                                       double r) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("ball_mass_exact: point dimension mismatch");
  }
  if (!(r > 0.0)) throw std::invalid_argument("ball_mass_exact: radius must be > 0");

  switch (family_) {
    case DensityFamily::gaussian: {
      if (dim_ != 1) return std::nullopt;
      const double sigma = std::sqrt(cov_(0, 0));
      const double hi = normal_cdf((x[0] + r - mean_[0]) / sigma);
      const double lo = normal_cdf((x[0] - r - mean_[0]) / sigma);
      return hi - lo;
    }
    case DensityFamily::uniform_box: {
      bool inside = true;
      for (int k = 0; k < dim_; ++k) {
        if (x[k] - r < lower_[k] || x[k] + r > upper_[k]) inside = false;
        // Separated along an axis: the ball misses the box entirely.
        if (x[k] + r < lower_[k] || x[k] - r > upper_[k]) return 0.0;
      }
      if (inside) {
        return unit_ball_volume(dim_) * std::pow(r, dim_) / box_volume_;
      }
      if (dim_ == 1) {
        const double a = std::max(x[0] - r, lower_[0]);
        const double b = std::min(x[0] + r, upper_[0]);
        return std::max(0.0, b - a) / box_volume_;
      }
      return std::nullopt;
    }
    case DensityFamily::exponential: {
      const double b = x[0] + r;
      if (b <= 0.0) return 0.0;
      const double a = std::max(0.0, x[0] - r);
      return std::exp(-rate_ * a) - std::exp(-rate_ * b);
    }
  }
  return std::nullopt;
}

double AnalyticDensity::lambda_min() const {
  if (family_ != DensityFamily::gaussian) {
    throw std::invalid_argument("lambda_min: only defined for the gaussian family");
  }
  return lambda_min_;
}

}  // namespace entrokl
