#pragma once

#include <cstdint>
#include <span>

namespace entrokl {

// Pairwise (cascade) summation. Used for every statistic that feeds a
// report, so sums do not depend on how work was scheduled.
double pairwise_sum(std::span<const double> values);

double pairwise_mean(std::span<const double> values);

// Unbiased sample variance (ddof = 1) around the pairwise mean.
// Returns 0 for fewer than two values.
double sample_variance(std::span<const double> values);

// Unbiased sample covariance (ddof = 1). Spans must have equal length.
double sample_covariance(std::span<const double> a, std::span<const double> b);

// Standard error of the mean: sqrt(sample_variance / n).
double standard_error(std::span<const double> values);

}  // namespace entrokl
