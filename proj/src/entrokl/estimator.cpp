#include "entrokl/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "entrokl/constants.hpp"
#include "entrokl/numeric.hpp"
#include "entrokl/rng.hpp"

namespace entrokl {

EntropyEstimate kl_entropy(const SampleSet& sample, const NnDistances& nn) {
  const std::int64_t n = sample.size();
  const int dim = sample.dim();
  if (nn.rho.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("kl_entropy: distances were not computed from this sample");
  }
  if (!nn.duplicate_indices.empty()) {
    throw DuplicatePointsError(nn.duplicate_indices);
  }

  const double log_vd = std::log(unit_ball_volume(dim));
  const double log_nm1 = std::log(static_cast<double>(n - 1));
  const double shift = log_vd + kEulerGamma + log_nm1;

  std::vector<double> log_rho(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    log_rho[static_cast<std::size_t>(i)] = std::log(nn.rho[static_cast<std::size_t>(i)]);
  }

  EntropyEstimate est;
  est.n = n;
  est.dim = dim;
  est.method = nn.method;
  est.log_rho_bar = pairwise_mean(log_rho);
  est.h_n = dim * est.log_rho_bar + shift;
  est.zeta.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    est.zeta[static_cast<std::size_t>(i)] = dim * log_rho[static_cast<std::size_t>(i)] + shift;
  }
  return est;
}

namespace {

// Coincident rows found by lexicographic sort; cheap duplicate census that
// does not require a nearest-neighbor pass.
std::int64_t count_coincident_pairs(const SampleSet& sample) {
  const std::int64_t n = sample.size();
  const int dim = sample.dim();
  const double* pts = sample.points().data();
  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::int64_t{0});
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    return std::lexicographical_compare(pts + a * dim, pts + (a + 1) * dim,
                                        pts + b * dim, pts + (b + 1) * dim);
  });
  std::int64_t pairs = 0;
  for (std::int64_t i = 1; i < n; ++i) {
    if (std::equal(pts + order[static_cast<std::size_t>(i - 1)] * dim,
                   pts + (order[static_cast<std::size_t>(i - 1)] + 1) * dim,
                   pts + order[static_cast<std::size_t>(i)] * dim)) {
      ++pairs;
    }
  }
  return pairs;
}

}  // namespace

JitterEstimate kl_entropy_with_jitter(const SampleSet& sample, double jitter_scale,
                                      std::uint64_t seed) {
  if (!(jitter_scale >= 0.0) || !std::isfinite(jitter_scale)) {
    throw std::invalid_argument("kl_entropy_with_jitter: jitter_scale must be >= 0");
  }

  if (jitter_scale == 0.0) {
    JitterEstimate out;
    out.estimate = kl_entropy(sample, nn_distances_tree(sample));
    out.duplicates_handled = 0;
    out.source_tag = sample.source_tag();
    return out;
  }

  const std::int64_t duplicates = count_coincident_pairs(sample);
  const std::int64_t n = sample.size();
  const int dim = sample.dim();

  SplitRng rng(seed);
  std::vector<double> jittered(sample.points());
  for (double& v : jittered) {
    v += rng.uniform(-jitter_scale, jitter_scale);
  }
  SampleSet moved(std::move(jittered), n, dim,
                  sample.source_tag() + "+jitter(scale=" + std::to_string(jitter_scale) +
                      ",seed=" + std::to_string(seed) + ")");

  JitterEstimate out;
  out.estimate = kl_entropy(moved, nn_distances_tree(moved));
  out.duplicates_handled = duplicates;
  out.source_tag = moved.source_tag();
  return out;
}

}  // namespace entrokl
