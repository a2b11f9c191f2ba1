#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrokl/density.hpp"
#include "entrokl/neighbors.hpp"

namespace entrokl {

struct ConvergencePoint {
  std::int64_t n = 0;
  double mean_h = 0.0;
  double bias = 0.0;   // mean_h - h_true
  double var_h = 0.0;  // sample variance across reps
  double mse = 0.0;    // mean of (h - h_true)^2 across reps
  double se_mean = 0.0;
};

struct RepRecord {
  std::int64_t n = 0;
  std::int64_t rep = 0;
  double h_n = 0.0;
  std::uint64_t seed = 0;
};

struct RepFailure {
  std::int64_t n = 0;
  std::int64_t rep = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct ConvergenceReport {
  std::string density_spec_json;
  std::vector<std::int64_t> n_grid;
  std::int64_t reps = 0;
  std::vector<ConvergencePoint> per_n;
  double h_true = 0.0;
  std::uint64_t master_seed = 0;
  NnMethod backend = NnMethod::tree;
  std::vector<RepRecord> rep_records;  // raw per-rep values, (n, rep) order
  std::vector<RepFailure> failures;
};

// Per-cell seed used by the convergence study and variance decomposition:
// derive_seed(master_seed, n, rep).
std::uint64_t experiment_cell_seed(std::uint64_t master_seed, std::int64_t n,
                                   std::int64_t rep);

// Monte Carlo convergence study against the density's closed-form entropy.
// Deterministic given master_seed, independent of thread count and backend
// (the two backends compute identical distances).
ConvergenceReport convergence_study(const AnalyticDensity& density,
                                    std::vector<std::int64_t> n_grid, std::int64_t reps,
                                    std::uint64_t master_seed, NnMethod backend);

struct VarianceDecomposition {
  std::int64_t n = 0;
  std::int64_t reps = 0;
  double var_h_direct = 0.0;
  double var_zeta1 = 0.0;
  double cov_zeta12 = 0.0;
  double recombined = 0.0;  // var_zeta1 / n + (n-1)/n * cov_zeta12
  double abs_diff = 0.0;
  double se_combined = 0.0;
  bool ok = false;
  std::uint64_t master_seed = 0;
};

// Checks the variance identity var(H_N) = (1/N) var(zeta_1) +
// ((N-1)/N) cov(zeta_1, zeta_2) across replications, within 3 combined
// standard errors. reuse_single_seed makes every rep identical (a
// degenerate-path diagnostic).
VarianceDecomposition variance_decomposition(const AnalyticDensity& density,
                                             std::int64_t n, std::int64_t reps,
                                             std::uint64_t master_seed,
                                             bool reuse_single_seed = false);

}  // namespace entrokl
