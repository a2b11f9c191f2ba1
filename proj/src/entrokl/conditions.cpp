#include "entrokl/conditions.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "entrokl/constants.hpp"
#include "entrokl/json_writer.hpp"
#include "entrokl/kdtree.hpp"
#include "entrokl/numeric.hpp"
#include "entrokl/parallel.hpp"
#include "entrokl/rng.hpp"

namespace entrokl {

namespace {

constexpr std::uint64_t kTagProbe = seed_tags::probe;
constexpr std::uint64_t kTagEval = seed_tags::eval;
constexpr std::uint64_t kTagOuterK = seed_tags::k_outer;
constexpr std::uint64_t kTagPairA = seed_tags::pair_a;

double relative_grid_step(int g, int k) {
  // log-spaced on [1e-4, 1]; k = g-1 lands exactly on 1.
  return std::pow(1e-4, 1.0 - static_cast<double>(k) / static_cast<double>(g - 1));
}

struct ExtremumEval {
  double value = 0.0;
  double std_error = 0.0;
  bool all_exact = false;
};

ExtremumEval eval_extremum(const AnalyticDensity& density, std::span<const double> x,
                           double big_r, int g, int mc_n, std::uint64_t seed,
                           bool maximize) {
  const int d = density.dim();
  const double vd = unit_ball_volume(d);
  ExtremumEval out;
  out.value = density.pdf(x);  // the r -> 0 limit candidate
  out.std_error = 0.0;
  out.all_exact = true;
  for (int k = 0; k < g; ++k) {
    const double r = big_r * relative_grid_step(g, k);
    const BallMass bm = ball_mass(density, x, r, mc_n,
                                  derive_seed(seed, kTagEval, static_cast<std::uint64_t>(g),
                                              static_cast<std::uint64_t>(k)));
    out.all_exact = out.all_exact && bm.exact;
    const double denom = vd * std::pow(r, d);
    const double value = bm.mass / denom;
    const double se = bm.std_error / denom;
    if (maximize ? value > out.value : value < out.value) {
      out.value = value;
      out.std_error = se;
    }
  }
  return out;
}

LocalFunctionalValue extremum_over_radii(const AnalyticDensity& density,
                                         std::span<const double> x, double big_r,
                                         int grid, int mc_n, std::uint64_t seed,
                                         bool maximize) {
  if (!(big_r > 0.0)) throw std::invalid_argument("maximal/minimal function: R must be > 0");
  if (grid < 2) throw std::invalid_argument("maximal/minimal function: grid must be >= 2");

  int g = grid;
  ExtremumEval best = eval_extremum(density, x, big_r, g, mc_n, seed, maximize);
  // Refinement by doubling is only meaningful on the exact ball-mass path;
  // with Monte Carlo masses the sampling noise dominates the grid error.
  if (best.all_exact) {
    while (g < 1024) {
      const ExtremumEval next =
          eval_extremum(density, x, big_r, 2 * g, mc_n, seed, maximize);
      const bool settled =
          std::fabs(next.value - best.value) <=
          1e-3 * std::max(std::fabs(next.value), std::numeric_limits<double>::min());
      best = next;
      g *= 2;
      if (settled) break;
    }
  }

  LocalFunctionalValue out;
  out.x.assign(x.begin(), x.end());
  out.r_or_big_r = big_r;
  out.value = best.value;
  out.kind = maximize ? LocalKind::M : LocalKind::m;
  out.grid_points = g;
  out.used_exact_ball_mass = best.all_exact;
  out.std_error = best.std_error;
  return out;
}

void require_finite_point(std::span<const double> x, const char* who) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) + ": point must be finite");
    }
  }
}

}  // namespace

const char* functional_kind_name(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::K: return "K";
    case FunctionalKind::K2: return "K2";
    case FunctionalKind::Q: return "Q";
    case FunctionalKind::T: return "T";
    case FunctionalKind::A: return "A";
  }
  return "?";
}

BallMass ball_mass(const AnalyticDensity& density, std::span<const double> x,
                   double r, int mc_n, std::uint64_t seed) {
  require_finite_point(x, "ball_mass");
  if (auto exact = density.ball_mass_exact(x, r)) {
    return {std::clamp(*exact, 0.0, 1.0), 0.0, true};
  }
  if (mc_n <= 0) {
    throw std::invalid_argument(
        "ball_mass: no closed form for this density/point; mc_n must be > 0");
  }

  const int d = density.dim();
  SplitRng rng(seed);
  std::vector<double> values(static_cast<std::size_t>(mc_n));
  std::vector<double> dir(static_cast<std::size_t>(d));
  std::vector<double> y(static_cast<std::size_t>(d));
  for (int i = 0; i < mc_n; ++i) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int k = 0; k < d; ++k) {
        dir[static_cast<std::size_t>(k)] = rng.normal();
        norm2 += dir[static_cast<std::size_t>(k)] * dir[static_cast<std::size_t>(k)];
      }
    } while (norm2 == 0.0);
    const double radius =
        r * std::pow(rng.uniform01(), 1.0 / d) / std::sqrt(norm2);
    for (int k = 0; k < d; ++k) {
      y[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(k)] +
                                       radius * dir[static_cast<std::size_t>(k)];
    }
    values[static_cast<std::size_t>(i)] = density.pdf(y);
  }
  const double volume = unit_ball_volume(d) * std::pow(r, d);
  return {pairwise_mean(values) * volume, standard_error(values) * volume, false};
}

LocalFunctionalValue local_average(const AnalyticDensity& density,
                                   std::span<const double> x, double r, int mc_n,
                                   std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("local_average: r must be > 0");
  const BallMass bm = ball_mass(density, x, r, mc_n, seed);
  const double denom = unit_ball_volume(density.dim()) * std::pow(r, density.dim());
  LocalFunctionalValue out;
  out.x.assign(x.begin(), x.end());
  out.r_or_big_r = r;
  out.value = bm.mass / denom;
  out.kind = LocalKind::I;
  out.grid_points = 1;
  out.used_exact_ball_mass = bm.exact;
  out.std_error = bm.std_error / denom;
  return out;
}

LocalFunctionalValue maximal_function(const AnalyticDensity& density,
                                      std::span<const double> x, double big_r,
                                      int grid, int mc_n, std::uint64_t seed) {
  return extremum_over_radii(density, x, big_r, grid, mc_n, seed, true);
}

LocalFunctionalValue minimal_function(const AnalyticDensity& density,
                                      std::span<const double> x, double big_r,
                                      int grid, int mc_n, std::uint64_t seed) {
  return extremum_over_radii(density, x, big_r, grid, mc_n, seed, false);
}

std::vector<double> functional_probe_point(const AnalyticDensity& density,
                                           std::uint64_t seed, std::int64_t index,
                                           double interior_margin) {
  SplitRng rng(derive_seed(seed, kTagProbe, static_cast<std::uint64_t>(index)));
  std::vector<double> x(static_cast<std::size_t>(density.dim()));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    density.draw_point(rng, x.data());
    if (interior_margin <= 0.0 || density.support_margin(x) >= interior_margin) {
      return x;
    }
  }
  throw std::invalid_argument(
      "functional_probe_point: interior margin leaves no probability mass");
}

double pair_log_gauge(std::span<const double> x, std::span<const double> y,
                      bool squared) {
  if (x.size() != y.size()) throw std::invalid_argument("pair_log_gauge: dimension mismatch");
  const double dist2 = squared_distance(x.data(), y.data(), static_cast<int>(x.size()));
  if (dist2 == 0.0) {
    throw std::invalid_argument("pair_log_gauge: coincident points, log rho undefined");
  }
  const double log_rho = 0.5 * std::log(dist2);
  return squared ? g_function(log_rho * log_rho) : g_function(std::fabs(log_rho));
}

namespace {

// Mean / SE over the finite entries; the divergence flag records the rest.
struct FiniteStats {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t dropped = 0;
};

FiniteStats finite_stats(const std::vector<double>& values) {
  std::vector<double> finite;
  finite.reserve(values.size());
  std::int64_t dropped = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      finite.push_back(v);
    } else {
      ++dropped;
    }
  }
  FiniteStats out;
  out.dropped = dropped;
  if (!finite.empty()) {
    out.mean = pairwise_mean(finite);
    out.se = standard_error(finite);
  }
  return out;
}

}  // namespace

FunctionalEstimate functional_k(const AnalyticDensity& density, double eps0,
                                std::int64_t n_outer, std::int64_t n_inner,
                                std::uint64_t seed, bool squared) {
  if (!(eps0 > 0.0)) throw std::invalid_argument("functional_k: eps0 must be > 0");
  if (n_outer < 100 || n_inner < 100) {
    throw std::invalid_argument("functional_k: n_outer and n_inner must be >= 100");
  }

  const int d = density.dim();
  std::vector<double> outer(static_cast<std::size_t>(n_outer));
  std::atomic<std::int64_t> ties{0};
  std::atomic<std::int64_t> tie_limit_hits{0};

  parallel_for(n_outer, [&](std::int64_t i) {
    SplitRng rng(derive_seed(seed, kTagOuterK, static_cast<std::uint64_t>(i)));
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> y(static_cast<std::size_t>(d));
    std::vector<double> terms(static_cast<std::size_t>(n_inner));
    density.draw_point(rng, x.data());
    for (std::int64_t j = 0; j < n_inner; ++j) {
      double dist2 = 0.0;
      int attempts = 0;
      for (;;) {
        density.draw_point(rng, y.data());
        dist2 = squared_distance(x.data(), y.data(), d);
        if (dist2 > 0.0) break;
        ties.fetch_add(1, std::memory_order_relaxed);
        if (++attempts >= 100) break;
      }
      if (dist2 == 0.0) {
        tie_limit_hits.fetch_add(1, std::memory_order_relaxed);
        terms[static_cast<std::size_t>(j)] = std::numeric_limits<double>::infinity();
        continue;
      }
      const double log_rho = 0.5 * std::log(dist2);
      terms[static_cast<std::size_t>(j)] =
          squared ? g_function(log_rho * log_rho) : g_function(std::fabs(log_rho));
    }
    outer[static_cast<std::size_t>(i)] =
        std::pow(pairwise_mean(terms), 1.0 + eps0);
  });

  FunctionalEstimate est;
  est.kind = squared ? FunctionalKind::K2 : FunctionalKind::K;
  est.params = {{"eps0", eps0}};
  est.n_outer = n_outer;
  est.n_inner = n_inner;
  est.seed = seed;

  const FiniteStats stats = finite_stats(outer);
  est.value = stats.mean;
  est.std_error = stats.se;
  if (stats.dropped > 0) {
    est.divergent = true;
    est.flags.push_back("divergent:" + std::to_string(stats.dropped) +
                        " non-finite outer terms");
  }
  if (std::int64_t t = ties.load(); t > 0) {
    est.flags.push_back("ties_redrawn:" + std::to_string(t));
  }
  if (tie_limit_hits.load() > 0) {
    est.flags.push_back("tie_redraw_limit_reached");
  }
  return est;
}

FunctionalEstimate functional_q(const AnalyticDensity& density, double eps1,
                                double r1, std::int64_t n_outer, int grid, int mc_n,
                                std::uint64_t seed) {
  if (!(eps1 > 0.0)) throw std::invalid_argument("functional_q: eps1 must be > 0");
  if (!(r1 > 0.0)) throw std::invalid_argument("functional_q: R1 must be > 0");
  if (n_outer < 1) throw std::invalid_argument("functional_q: n_outer must be >= 1");

  std::vector<double> outer(static_cast<std::size_t>(n_outer));
  std::atomic<bool> any_mc{false};
  parallel_for(n_outer, [&](std::int64_t i) {
    const std::vector<double> x = functional_probe_point(density, seed, i, 0.0);
    const LocalFunctionalValue m = maximal_function(
        density, x, r1, grid, mc_n, derive_seed(seed, kTagEval, static_cast<std::uint64_t>(i)));
    if (!m.used_exact_ball_mass) any_mc.store(true, std::memory_order_relaxed);
    outer[static_cast<std::size_t>(i)] = std::pow(m.value, eps1);
  });

  FunctionalEstimate est;
  est.kind = FunctionalKind::Q;
  est.params = {{"eps1", eps1}, {"r1", r1}};
  est.n_outer = n_outer;
  est.n_inner = any_mc.load() ? mc_n : 0;
  est.seed = seed;
  const FiniteStats stats = finite_stats(outer);
  est.value = stats.mean;
  est.std_error = stats.se;
  if (stats.dropped > 0) {
    est.divergent = true;
    est.flags.push_back("divergent:" + std::to_string(stats.dropped) +
                        " non-finite outer terms");
  }
  return est;
}

FunctionalEstimate functional_t(const AnalyticDensity& density, double eps2,
                                double r2, std::int64_t n_outer, int grid, int mc_n,
                                std::uint64_t seed) {
  if (!(eps2 > 0.0 && eps2 < 1.0)) {
    throw std::invalid_argument("functional_t: eps2 must be in (0,1)");
  }
  if (!(r2 > 0.0)) throw std::invalid_argument("functional_t: R2 must be > 0");
  if (n_outer < 1) throw std::invalid_argument("functional_t: n_outer must be >= 1");

  // Bounded-support route: keep probes off the box boundary by R2.
  const double interior_margin =
      density.family() == DensityFamily::uniform_box ? r2 : 0.0;

  std::vector<double> outer(static_cast<std::size_t>(n_outer));
  std::vector<std::uint8_t> zero_m(static_cast<std::size_t>(n_outer), 0);
  std::atomic<bool> any_mc{false};
  parallel_for(n_outer, [&](std::int64_t i) {
    const std::vector<double> x =
        functional_probe_point(density, seed, i, interior_margin);
    const LocalFunctionalValue m = minimal_function(
        density, x, r2, grid, mc_n, derive_seed(seed, kTagEval, static_cast<std::uint64_t>(i)));
    if (!m.used_exact_ball_mass) any_mc.store(true, std::memory_order_relaxed);
    if (m.value <= 0.0) {
      zero_m[static_cast<std::size_t>(i)] = 1;
      outer[static_cast<std::size_t>(i)] = std::numeric_limits<double>::infinity();
    } else {
      outer[static_cast<std::size_t>(i)] = std::pow(m.value, -eps2);
    }
  });

  FunctionalEstimate est;
  est.kind = FunctionalKind::T;
  est.params = {{"eps2", eps2}, {"r2", r2}};
  est.n_outer = n_outer;
  est.n_inner = any_mc.load() ? mc_n : 0;
  est.seed = seed;
  if (interior_margin > 0.0) {
    est.flags.push_back("interior_margin:" + format_double(interior_margin));
  }

  const FiniteStats stats = finite_stats(outer);
  est.value = stats.mean;
  est.std_error = stats.se;
  for (std::int64_t i = 0; i < n_outer; ++i) {
    if (zero_m[static_cast<std::size_t>(i)]) {
      est.divergent = true;
      const std::vector<double> x =
          functional_probe_point(density, seed, i, interior_margin);
      std::string where = "divergent:m_f=0 at x=[";
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) where += ",";
        where += format_double(x[k]);
      }
      where += "]";
      est.flags.push_back(where);
    }
  }
  if (stats.dropped > 0 && !est.divergent) {
    est.divergent = true;
    est.flags.push_back("divergent:" + std::to_string(stats.dropped) +
                        " non-finite outer terms");
  }
  return est;
}

FunctionalEstimate check_condition_a(const AnalyticDensity& density, double p,
                                     std::int64_t n_pairs, std::uint64_t seed) {
  if (!(p > 1.0)) throw std::invalid_argument("check_condition_a: p must be > 1");
  if (n_pairs < 4) throw std::invalid_argument("check_condition_a: n_pairs must be >= 4");

  const int d = density.dim();
  std::vector<double> values(static_cast<std::size_t>(n_pairs));
  std::atomic<std::int64_t> ties{0};
  parallel_for(n_pairs, [&](std::int64_t i) {
    SplitRng rng(derive_seed(seed, kTagPairA, static_cast<std::uint64_t>(i)));
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> y(static_cast<std::size_t>(d));
    density.draw_point(rng, x.data());
    double dist2 = 0.0;
    int attempts = 0;
    do {
      density.draw_point(rng, y.data());
      dist2 = squared_distance(x.data(), y.data(), d);
      if (dist2 == 0.0) ties.fetch_add(1, std::memory_order_relaxed);
    } while (dist2 == 0.0 && ++attempts < 100);
    values[static_cast<std::size_t>(i)] =
        dist2 == 0.0 ? std::numeric_limits<double>::infinity()
                     : std::pow(std::fabs(0.5 * std::log(dist2)), p);
  });

  FunctionalEstimate est;
  est.kind = FunctionalKind::A;
  est.params = {{"p", p}};
  est.n_outer = n_pairs;
  est.n_inner = 0;
  est.seed = seed;

  const FiniteStats full = finite_stats(values);
  est.value = full.mean;
  est.std_error = full.se;
  if (full.dropped > 0) {
    est.divergent = true;
    est.flags.push_back("divergent:" + std::to_string(full.dropped) +
                        " non-finite pair terms");
  }
  if (std::int64_t t = ties.load(); t > 0) {
    est.flags.push_back("ties_redrawn:" + std::to_string(t));
  }

  std::vector<double> head(values.begin(), values.begin() + n_pairs / 2);
  const FiniteStats half = finite_stats(head);
  est.half_value = half.mean;
  est.half_std_error = half.se;
  const double joint = std::sqrt(full.se * full.se + half.se * half.se);
  est.stable = std::fabs(full.mean - half.mean) <= 3.0 * joint;
  if (!est.stable) est.flags.push_back("tail_unstable");
  return est;
}

MinorizationReport check_gaussian_minorization(const AnalyticDensity& density,
                                               double big_r,
                                               const std::vector<std::vector<double>>& xs,
                                               int grid, int mc_n, std::uint64_t seed) {
  if (density.family() != DensityFamily::gaussian) {
    throw std::invalid_argument(
        "check_gaussian_minorization: gaussian family required");
  }
  if (!(big_r > 0.0)) throw std::invalid_argument("check_gaussian_minorization: R must be > 0");
  if (xs.empty()) throw std::invalid_argument("check_gaussian_minorization: no probe points");

  MinorizationReport report;
  report.big_r = big_r;
  report.lambda_min = density.lambda_min();
  report.c = std::exp(-big_r * big_r / (2.0 * report.lambda_min));
  report.seed = seed;
  report.probes.resize(xs.size());

  parallel_for(static_cast<std::int64_t>(xs.size()), [&](std::int64_t i) {
    const auto& x = xs[static_cast<std::size_t>(i)];
    const LocalFunctionalValue m = minimal_function(
        density, x, big_r, grid, mc_n, derive_seed(seed, kTagEval, static_cast<std::uint64_t>(i)));
    MinorizationProbe& probe = report.probes[static_cast<std::size_t>(i)];
    probe.x = x;
    probe.f_x = density.pdf(x);
    probe.m_hat = m.value;
    probe.std_error = m.std_error;
    probe.bound = report.c * probe.f_x;
    probe.margin = probe.m_hat - probe.bound;
    probe.ok = probe.margin >= -(3.0 * m.std_error + 1e-12);
  });

  report.all_ok = true;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& probe : report.probes) {
    report.all_ok = report.all_ok && probe.ok;
    report.min_margin = std::min(report.min_margin, probe.margin);
  }
  return report;
}

std::vector<std::vector<double>> default_minorization_probes(
    const AnalyticDensity& density, std::int64_t count, std::uint64_t seed) {
  if (density.family() != DensityFamily::gaussian) {
    throw std::invalid_argument("default_minorization_probes: gaussian family required");
  }
  if (count < 1) throw std::invalid_argument("default_minorization_probes: count must be >= 1");
  const int d = density.dim();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    SplitRng rng(derive_seed(seed, kTagProbe, static_cast<std::uint64_t>(i)));
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const double sigma = std::sqrt(density.cov()(k, k));
      x[static_cast<std::size_t>(k)] =
          rng.uniform(density.mean()[k] - 3.0 * sigma, density.mean()[k] + 3.0 * sigma);
    }
    out[static_cast<std::size_t>(i)] = std::move(x);
  }
  return out;
}

LogMomentIdentityReport verify_log_moment_identities(double rate, double quad_tol) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("verify_log_moment_identities: rate must be > 0");
  }
  if (!(quad_tol > 0.0)) {
    throw std::invalid_argument("verify_log_moment_identities: quad_tol must be > 0");
  }

  const double inv_e = std::exp(-1.0);
  auto cdf = [rate](double u) { return -std::expm1(-rate * u); };
  auto pdf = [rate](double u) { return rate * std::exp(-rate * u); };

  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> tail;
  const double term_tol = std::sqrt(std::numeric_limits<double>::epsilon());

  LogMomentIdentityReport report;
  report.rate = rate;
  report.quad_tol = quad_tol;
  try {
    report.identity1_lhs = finite.integrate(
        [&](double u) {
          if (u <= 0.0) return 0.0;
          const double neg_log = -std::log(u);
          return neg_log * std::log(neg_log) * pdf(u);
        },
        0.0, inv_e, term_tol);
    report.identity1_rhs = finite.integrate(
        [&](double u) {
          if (u <= 0.0) return 0.0;
          return cdf(u) * (std::log(-std::log(u)) + 1.0) / u;
        },
        0.0, inv_e, term_tol);
    report.identity2_lhs = tail.integrate(
        [&](double t) {
          const double u = M_E + t;
          const double log_u = std::log(u);
          return log_u * std::log(log_u) * pdf(u);
        },
        term_tol);
    report.identity2_rhs = tail.integrate(
        [&](double t) {
          const double u = M_E + t;
          return (1.0 - cdf(u)) * (std::log(std::log(u)) + 1.0) / u;
        },
        term_tol);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("quadrature did not converge: ") + e.what());
  }

  report.ok =
      std::fabs(report.identity1_lhs - report.identity1_rhs) <= quad_tol &&
      std::fabs(report.identity2_lhs - report.identity2_rhs) <= quad_tol;
  return report;
}

}  // namespace entrokl
