#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "entrokl/density.hpp"

namespace entrokl {

// Realizations of the rescaled nearest-neighbor statistic
//   xi_{N,x} = (N-1) V_d gamma_tilde min_j rho^d(x, X_j),
// each from a fresh draw of N-1 points. Per-rep seeds are derived from
// (seed, rep index), so the output is independent of scheduling.
std::vector<double> simulate_xi(const AnalyticDensity& density,
                                std::span<const double> x, std::int64_t n,
                                std::int64_t reps, std::uint64_t seed);

struct ConditionalLawReport {
  std::vector<double> x;
  std::int64_t n = 0;
  std::int64_t reps = 0;
  double ks_distance = 0.0;        // empirical CDF vs 1 - exp(-f(x) u / gamma_tilde)
  double empirical_mean_log = 0.0;
  double target_mean_log = 0.0;    // -log f(x)
  double rate = 0.0;               // f(x) / gamma_tilde
  std::uint64_t seed = 0;
};

// Rejects x outside the support (the limit law is defined only there).
ConditionalLawReport conditional_law_report(const AnalyticDensity& density,
                                            std::span<const double> x, std::int64_t n,
                                            std::int64_t reps, std::uint64_t seed);

// F_{N,x}(u) = 1 - (1 - mass(B(x, r_N(u))))^(N-1) with
// r_N(u) = (u / (V_d gamma_tilde (N-1)))^(1/d); evaluated directly from the
// formula, no simulation. Ball mass falls back to Monte Carlo when no
// closed form exists.
double exact_conditional_cdf(const AnalyticDensity& density, std::span<const double> x,
                             std::int64_t n, double u, int mc_n = 4096,
                             std::uint64_t seed = 0);

// One-sample Kolmogorov-Smirnov distance between sorted samples and the
// exponential CDF with the given rate.
double ks_distance_to_exponential(std::span<const double> sorted_values, double rate);

}  // namespace entrokl
