#pragma once

#include <cstdint>
#include <vector>

#include "entrokl/neighbors.hpp"
#include "entrokl/sample_set.hpp"

namespace entrokl {

// The nearest-neighbor entropy estimate together with its decomposition:
// h_n = dim * log_rho_bar + log V_dim + euler_gamma + log(N-1), equivalently
// the mean of the per-point contributions zeta_i = log(rho_i^d V_d
// gamma_tilde (N-1)). zeta is always materialized so variance diagnostics
// can look at individual contributions.
struct EntropyEstimate {
  double h_n = 0.0;
  std::int64_t n = 0;
  int dim = 0;
  double log_rho_bar = 0.0;
  std::vector<double> zeta;
  NnMethod method = NnMethod::brute;
};

// Throws DuplicatePointsError (with the offending index pairs) when any
// rho_i == 0.
EntropyEstimate kl_entropy(const SampleSet& sample, const NnDistances& nn);

struct JitterEstimate {
  EntropyEstimate estimate;
  std::int64_t duplicates_handled = 0;  // coincident pairs present before jitter
  std::string source_tag;               // provenance, including the jitter record
};

// Duplicate remediation for real data: adds uniform noise in
// [-jitter_scale, jitter_scale]^d to every point (seeded, deterministic),
// then estimates via the tree backend. With jitter_scale == 0 this is the
// plain tree-backed estimate and duplicates remain a hard error.
JitterEstimate kl_entropy_with_jitter(const SampleSet& sample, double jitter_scale,
                                      std::uint64_t seed);

}  // namespace entrokl
