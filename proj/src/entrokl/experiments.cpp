#include "entrokl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "entrokl/estimator.hpp"
#include "entrokl/numeric.hpp"
#include "entrokl/parallel.hpp"
#include "entrokl/rng.hpp"

namespace entrokl {

std::uint64_t experiment_cell_seed(std::uint64_t master_seed, std::int64_t n,
                                   std::int64_t rep) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(n),
                     static_cast<std::uint64_t>(rep));
}

ConvergenceReport convergence_study(const AnalyticDensity& density,
                                    std::vector<std::int64_t> n_grid, std::int64_t reps,
                                    std::uint64_t master_seed, NnMethod backend) {
  if (n_grid.empty()) throw std::invalid_argument("convergence_study: empty n grid");
  for (std::int64_t n : n_grid) {
    if (n < 2) throw std::invalid_argument("convergence_study: every n must be >= 2");
  }
  if (reps < 2) throw std::invalid_argument("convergence_study: reps must be >= 2");
  std::sort(n_grid.begin(), n_grid.end());

  ConvergenceReport report;
  report.density_spec_json = density.to_json();
  report.n_grid = n_grid;
  report.reps = reps;
  report.h_true = density.analytic_entropy();
  report.master_seed = master_seed;
  report.backend = backend;

  struct Cell {
    double h = 0.0;
    bool failed = false;
    std::string message;
  };
  const std::int64_t n_cells = static_cast<std::int64_t>(n_grid.size()) * reps;
  std::vector<Cell> cells(static_cast<std::size_t>(n_cells));

  parallel_for(n_cells, [&](std::int64_t c) {
    const std::int64_t n = n_grid[static_cast<std::size_t>(c / reps)];
    const std::int64_t rep = c % reps;
    const std::uint64_t seed = experiment_cell_seed(master_seed, n, rep);
    Cell& cell = cells[static_cast<std::size_t>(c)];
    try {
      const SampleSet sample = density.sample(n, seed);
      cell.h = kl_entropy(sample, nn_distances(sample, backend)).h_n;
    } catch (const DuplicatePointsError& e) {
      cell.failed = true;
      cell.message = e.what();
    }
  });

  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::int64_t n = n_grid[gi];
    std::vector<double> hs;
    hs.reserve(static_cast<std::size_t>(reps));
    for (std::int64_t rep = 0; rep < reps; ++rep) {
      const Cell& cell = cells[gi * static_cast<std::size_t>(reps) +
                               static_cast<std::size_t>(rep)];
      const std::uint64_t seed = experiment_cell_seed(master_seed, n, rep);
      if (cell.failed) {
        report.failures.push_back({n, rep, seed, cell.message});
        continue;
      }
      report.rep_records.push_back({n, rep, cell.h, seed});
      hs.push_back(cell.h);
    }

    ConvergencePoint point;
    point.n = n;
    if (!hs.empty()) {
      point.mean_h = pairwise_mean(hs);
      point.bias = point.mean_h - report.h_true;
      point.var_h = sample_variance(hs);
      std::vector<double> sq(hs.size());
      for (std::size_t i = 0; i < hs.size(); ++i) {
        const double e = hs[i] - report.h_true;
        sq[i] = e * e;
      }
      point.mse = pairwise_mean(sq);
      point.se_mean = std::sqrt(point.var_h / static_cast<double>(hs.size()));
    }
    report.per_n.push_back(point);
  }
  return report;
}

VarianceDecomposition variance_decomposition(const AnalyticDensity& density,
                                             std::int64_t n, std::int64_t reps,
                                             std::uint64_t master_seed,
                                             bool reuse_single_seed) {
  if (n < 3) throw std::invalid_argument("variance_decomposition: n must be >= 3");
  if (reps < 100) throw std::invalid_argument("variance_decomposition: reps must be >= 100");

  std::vector<double> h(static_cast<std::size_t>(reps));
  std::vector<double> zeta1(static_cast<std::size_t>(reps));
  std::vector<double> zeta2(static_cast<std::size_t>(reps));
  parallel_for(reps, [&](std::int64_t rep) {
    const std::uint64_t seed =
        experiment_cell_seed(master_seed, n, reuse_single_seed ? 0 : rep);
    const SampleSet sample = density.sample(n, seed);
    const EntropyEstimate est = kl_entropy(sample, nn_distances_tree(sample));
    h[static_cast<std::size_t>(rep)] = est.h_n;
    zeta1[static_cast<std::size_t>(rep)] = est.zeta[0];
    zeta2[static_cast<std::size_t>(rep)] = est.zeta[1];
  });

  VarianceDecomposition out;
  out.n = n;
  out.reps = reps;
  out.master_seed = master_seed;
  out.var_h_direct = sample_variance(h);
  out.var_zeta1 = sample_variance(zeta1);
  out.cov_zeta12 = sample_covariance(zeta1, zeta2);
  const double nf = static_cast<double>(n);
  out.recombined = out.var_zeta1 / nf + (nf - 1.0) / nf * out.cov_zeta12;
  out.abs_diff = std::fabs(out.recombined - out.var_h_direct);

  // Normal-approximation standard errors for the three moment estimators.
  const double rf = static_cast<double>(reps);
  const double se_var_h = out.var_h_direct * std::sqrt(2.0 / (rf - 1.0));
  const double se_var_z = out.var_zeta1 * std::sqrt(2.0 / (rf - 1.0));
  const double var_z2 = sample_variance(zeta2);
  const double se_cov = std::sqrt(
      std::max(0.0, out.var_zeta1 * var_z2 + out.cov_zeta12 * out.cov_zeta12) /
      (rf - 1.0));
  out.se_combined = std::sqrt(se_var_h * se_var_h +
                              (se_var_z / nf) * (se_var_z / nf) +
                              ((nf - 1.0) / nf * se_cov) * ((nf - 1.0) / nf * se_cov));
  // Absolute floor covers the degenerate all-identical case, where both
  // sides are zero up to rounding and the standard errors vanish.
  out.ok = out.abs_diff <= 3.0 * out.se_combined + 1e-15 * std::max(1.0, out.var_h_direct);
  return out;
}

}  // namespace entrokl
