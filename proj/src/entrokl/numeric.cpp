#include "entrokl/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace entrokl {

namespace {
constexpr std::size_t kPairwiseBlock = 32;
}

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double pairwise_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = pairwise_mean(values);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  return pairwise_sum(sq) / static_cast<double>(n - 1);
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("sample_covariance: length mismatch");
  }
  const std::size_t n = a.size();
  if (n < 2) return 0.0;
  const double ma = pairwise_mean(a);
  const double mb = pairwise_mean(b);
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) {
    prod[i] = (a[i] - ma) * (b[i] - mb);
  }
  return pairwise_sum(prod) / static_cast<double>(n - 1);
}

double standard_error(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  return std::sqrt(sample_variance(values) / static_cast<double>(values.size()));
}

}  // namespace entrokl
