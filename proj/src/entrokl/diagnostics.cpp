#include "entrokl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "entrokl/conditions.hpp"
#include "entrokl/constants.hpp"
#include "entrokl/kdtree.hpp"
#include "entrokl/numeric.hpp"
#include "entrokl/parallel.hpp"
#include "entrokl/rng.hpp"

namespace entrokl {

namespace {
constexpr std::uint64_t kTagRep = seed_tags::xi_rep;
}

std::vector<double> simulate_xi(const AnalyticDensity& density,
                                std::span<const double> x, std::int64_t n,
                                std::int64_t reps, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("simulate_xi: n must be >= 2");
  if (reps < 1) throw std::invalid_argument("simulate_xi: reps must be >= 1");
  if (static_cast<int>(x.size()) != density.dim()) {
    throw std::invalid_argument("simulate_xi: point dimension mismatch");
  }

  const int d = density.dim();
  const double scale =
      static_cast<double>(n - 1) * unit_ball_volume(d) * kGammaTilde;

  std::vector<double> out(static_cast<std::size_t>(reps));
  parallel_for(reps, [&](std::int64_t rep) {
    SplitRng rng(derive_seed(seed, kTagRep, static_cast<std::uint64_t>(rep)));
    std::vector<double> y(static_cast<std::size_t>(d));
    double best2 = std::numeric_limits<double>::infinity();
    for (std::int64_t j = 0; j + 1 < n; ++j) {
      density.draw_point(rng, y.data());
      best2 = std::min(best2, squared_distance(x.data(), y.data(), d));
    }
    if (best2 == 0.0) {
      // A continuous law cannot hit x exactly; this signals an RNG or
      // density misconfiguration.
      throw std::runtime_error("simulate_xi: zero nearest-neighbor distance at rep " +
                               std::to_string(rep) + " (seed " +
                               std::to_string(derive_seed(seed, kTagRep,
                                                          static_cast<std::uint64_t>(rep))) +
                               ")");
    }
    out[static_cast<std::size_t>(rep)] = scale * std::pow(best2, 0.5 * d);
  });
  return out;
}

double ks_distance_to_exponential(std::span<const double> sorted_values, double rate) {
  const std::size_t m = sorted_values.size();
  if (m == 0) throw std::invalid_argument("ks_distance_to_exponential: empty sample");
  double ks = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double cdf = -std::expm1(-rate * sorted_values[i]);
    const double low = static_cast<double>(i) / static_cast<double>(m);
    const double high = static_cast<double>(i + 1) / static_cast<double>(m);
    ks = std::max(ks, std::max(cdf - low, high - cdf));
  }
  return ks;
}

ConditionalLawReport conditional_law_report(const AnalyticDensity& density,
                                            std::span<const double> x, std::int64_t n,
                                            std::int64_t reps, std::uint64_t seed) {
  const double fx = density.pdf(x);
  if (!(fx > 0.0)) {
    throw std::invalid_argument(
        "conditional_law_report: f(x) = 0, x is outside the support");
  }

  std::vector<double> xi = simulate_xi(density, x, n, reps, seed);

  std::vector<double> log_xi(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) log_xi[i] = std::log(xi[i]);

  std::sort(xi.begin(), xi.end());

  ConditionalLawReport report;
  report.x.assign(x.begin(), x.end());
  report.n = n;
  report.reps = reps;
  report.rate = fx / kGammaTilde;
  report.ks_distance = ks_distance_to_exponential(xi, report.rate);
  report.empirical_mean_log = pairwise_mean(log_xi);
  report.target_mean_log = -std::log(fx);
  report.seed = seed;
  return report;
}

double exact_conditional_cdf(const AnalyticDensity& density, std::span<const double> x,
                             std::int64_t n, double u, int mc_n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("exact_conditional_cdf: n must be >= 2");
  if (!(u >= 0.0)) throw std::invalid_argument("exact_conditional_cdf: u must be >= 0");
  if (u == 0.0) return 0.0;

  const int d = density.dim();
  const double radius = std::pow(
      u / (unit_ball_volume(d) * kGammaTilde * static_cast<double>(n - 1)), 1.0 / d);
  const double mass =
      std::clamp(ball_mass(density, x, radius, mc_n, seed).mass, 0.0, 1.0);
  if (mass >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n - 1) * std::log1p(-mass));
}

}  // namespace entrokl
