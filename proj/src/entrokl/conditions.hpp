#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entrokl/density.hpp"

namespace entrokl {

// Tags feeding derive_seed for each draw purpose, public so that a single
// probe or evaluation can be reproduced outside the estimation loops.
namespace seed_tags {
inline constexpr std::uint64_t probe = 0x70726F62;    // outer probe draws
inline constexpr std::uint64_t eval = 0x6576616C;     // per-probe M/m evaluations
inline constexpr std::uint64_t k_outer = 0x4B6F7574;  // K outer+inner streams
inline constexpr std::uint64_t pair_a = 0x70616972;   // condition (A) pairs
inline constexpr std::uint64_t xi_rep = 0x78697265;   // conditional-law reps
}  // namespace seed_tags

enum class LocalKind { I, M, m };

// One evaluation of I_f, M_f or m_f at a point. std_error is 0 when every
// ball mass came from a closed form.
struct LocalFunctionalValue {
  std::vector<double> x;
  double r_or_big_r = 0.0;
  double value = 0.0;
  LocalKind kind = LocalKind::I;
  int grid_points = 0;
  bool used_exact_ball_mass = false;
  double std_error = 0.0;
};

struct BallMass {
  double mass = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

// Mass of B(x, r): closed form when the density provides one, otherwise
// Monte Carlo with mc_n points uniform in the ball (Gaussian direction,
// radius r * u^(1/d)).
BallMass ball_mass(const AnalyticDensity& density, std::span<const double> x,
                   double r, int mc_n, std::uint64_t seed);

// I_f(x, r): ball mass divided by r^d V_d.
LocalFunctionalValue local_average(const AnalyticDensity& density,
                                   std::span<const double> x, double r, int mc_n,
                                   std::uint64_t seed);

// M_f(x, R): supremum of I_f(x, .) over the candidate set {f(x)} union
// {I_f(x, r_k)} for r_k log-spaced on [1e-4 R, R]. The f(x) candidate is the
// r -> 0 limit, valid at continuity points. When all ball masses are exact
// the grid is doubled until the extremum moves by < 0.1%.
LocalFunctionalValue maximal_function(const AnalyticDensity& density,
                                      std::span<const double> x, double big_r,
                                      int grid, int mc_n, std::uint64_t seed);

// m_f(x, R): infimum over the same candidate set.
LocalFunctionalValue minimal_function(const AnalyticDensity& density,
                                      std::span<const double> x, double big_r,
                                      int grid, int mc_n, std::uint64_t seed);

enum class FunctionalKind { K, K2, Q, T, A };

const char* functional_kind_name(FunctionalKind kind);

// Monte Carlo estimate of one of the global condition functionals.
// n_inner is the inner-loop draw count for K/K2 and the per-ball Monte
// Carlo count for Q/T (0 when every ball mass was exact).
struct FunctionalEstimate {
  FunctionalKind kind = FunctionalKind::K;
  double value = 0.0;
  double std_error = 0.0;
  std::vector<std::pair<std::string, double>> params;
  std::int64_t n_outer = 0;
  std::int64_t n_inner = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> flags;
  bool divergent = false;
  // Condition (A) tail-stability extras.
  double half_value = 0.0;
  double half_std_error = 0.0;
  bool stable = true;
};

// K_f (squared = false) or K_{f,2} (squared = true): nested Monte Carlo of
// the inner gauge average raised to 1 + eps0. Coincident draws are redrawn
// (capped at 100 per outer point, then flagged).
FunctionalEstimate functional_k(const AnalyticDensity& density, double eps0,
                                std::int64_t n_outer, std::int64_t n_inner,
                                std::uint64_t seed, bool squared);

// Q_f(eps1, R1) = E[ M_f(X, R1)^eps1 ].
FunctionalEstimate functional_q(const AnalyticDensity& density, double eps1,
                                double r1, std::int64_t n_outer, int grid, int mc_n,
                                std::uint64_t seed);

// T_f(eps2, R2) = E[ m_f(X, R2)^(-eps2) ], eps2 in (0, 1). A zero m_f
// estimate raises the divergence flag with the offending x recorded.
// For the uniform box family, probe points are redrawn to keep a margin of
// R2 from the support boundary (documented policy, not a silent assumption).
FunctionalEstimate functional_t(const AnalyticDensity& density, double eps2,
                                double r2, std::int64_t n_outer, int grid, int mc_n,
                                std::uint64_t seed);

// Condition (A): E |log rho(X1, X2)|^p over independent pairs, with a
// tail-stability verdict (full vs half sample within 3 joint standard
// errors).
FunctionalEstimate check_condition_a(const AnalyticDensity& density, double p,
                                     std::int64_t n_pairs, std::uint64_t seed);

// The probe draw used by the Q/T outer loops; exposed so a single draw can
// be reproduced externally. interior_margin > 0 redraws until the point is
// at least that far from the support boundary.
std::vector<double> functional_probe_point(const AnalyticDensity& density,
                                           std::uint64_t seed, std::int64_t index,
                                           double interior_margin);

// Gauge of one pair: G(|log rho(x,y)|), or G(log^2 rho(x,y)) when squared.
double pair_log_gauge(std::span<const double> x, std::span<const double> y,
                      bool squared);

struct MinorizationProbe {
  std::vector<double> x;
  double f_x = 0.0;
  double m_hat = 0.0;
  double std_error = 0.0;
  double bound = 0.0;   // c * f(x)
  double margin = 0.0;  // m_hat - bound
  bool ok = false;
};

struct MinorizationReport {
  double big_r = 0.0;
  double lambda_min = 0.0;
  double c = 0.0;  // exp(-R^2 / (2 lambda_min))
  std::uint64_t seed = 0;
  std::vector<MinorizationProbe> probes;
  double min_margin = 0.0;
  bool all_ok = false;
};

// Checks m_f(x, R) >= exp(-R^2/(2 lambda_min)) f(x) at the given probe
// points; the tolerance is 3 standard errors of the m_f estimate. Gaussian
// family only.
MinorizationReport check_gaussian_minorization(const AnalyticDensity& density,
                                               double big_r,
                                               const std::vector<std::vector<double>>& xs,
                                               int grid, int mc_n, std::uint64_t seed);

// Probe points drawn uniformly in mean_k +/- 3 sqrt(cov_kk) per axis.
std::vector<std::vector<double>> default_minorization_probes(
    const AnalyticDensity& density, std::int64_t count, std::uint64_t seed);

struct LogMomentIdentityReport {
  double rate = 0.0;
  double quad_tol = 0.0;
  double identity1_lhs = 0.0;
  double identity1_rhs = 0.0;
  double identity2_lhs = 0.0;
  double identity2_rhs = 0.0;
  bool ok = false;
};

// Verifies the two integration-by-parts identities for the exponential CDF
// F(u) = 1 - exp(-rate u) by adaptive quadrature:
//   1) int_(0,1/e] (-log u) log(-log u) dF = int_(0,1/e] F(u) (log(-log u)+1)/u du
//   2) int_(e,inf) log u log log u dF     = int_(e,inf) (1-F(u)) (log log u+1)/u du
LogMomentIdentityReport verify_log_moment_identities(double rate, double quad_tol);

}  // namespace entrokl
