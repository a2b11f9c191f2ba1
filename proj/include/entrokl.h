/*
 * entrokl — Kozachenko-Leonenko nearest-neighbor entropy estimation.
 *
 * C interface to the shared library. Handles are opaque; every fallible
 * call returns a status code and reports detail through
 * entrokl_last_error(). Strings returned through char** out-parameters are
 * heap-allocated and must be released with entrokl_string_free().
 *
 * All randomized operations take an explicit 64-bit seed and are
 * deterministic given it, independent of the worker-thread cap.
 */

#ifndef ENTROKL_H
#define ENTROKL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------ */
/* Status codes                                                        */

typedef enum entrokl_status {
  ENTROKL_OK = 0,
  ENTROKL_ERROR_INVALID_ARGUMENT = 1,
  ENTROKL_ERROR_PARSE = 2,
  ENTROKL_ERROR_DUPLICATE_POINTS = 3,
  ENTROKL_ERROR_DIVERGENT = 4, /* report produced, finiteness check failed */
  ENTROKL_ERROR_RUNTIME = 5
} entrokl_status;

/* Library version string, e.g. "0.1.0". */
const char* entrokl_version(void);

/* Thread-local message for the most recent failing call. */
const char* entrokl_last_error(void);

void entrokl_string_free(char* s);

/* Worker-thread cap for internally parallel operations; 0 = hardware
 * concurrency. Results never depend on this value. */
void entrokl_set_threads(int n);

/* ------------------------------------------------------------------ */
/* Core math                                                           */

double entrokl_euler_gamma(void);
double entrokl_gamma_tilde(void);

/* Volume of the unit Euclidean ball in dimension dim (dim >= 1). */
entrokl_status entrokl_unit_ball_volume(int dim, double* out);

/* The convex gauge: 0 on [0,1), t*log(t) on [1,inf). Rejects t < 0. */
entrokl_status entrokl_g_function(double t, double* out);

/* ------------------------------------------------------------------ */
/* Densities                                                           */

typedef struct entrokl_density entrokl_density;

/* Parses {"family":"gaussian","mean":[...],"cov":[[...]]} |
 *        {"family":"uniform_box","lower":[...],"upper":[...]} |
 *        {"family":"exponential","rate":x}                           */
entrokl_status entrokl_density_parse(const char* json_text, entrokl_density** out);
void entrokl_density_free(entrokl_density* density);

int entrokl_density_dim(const entrokl_density* density);
const char* entrokl_density_family(const entrokl_density* density);
entrokl_status entrokl_density_to_json(const entrokl_density* density, char** json_out);
entrokl_status entrokl_density_pdf(const entrokl_density* density, const double* x,
                                   int dim, double* out);
entrokl_status entrokl_density_analytic_entropy(const entrokl_density* density,
                                                double* out);

/* ------------------------------------------------------------------ */
/* Sample sets                                                         */

typedef struct entrokl_sample_set entrokl_sample_set;

entrokl_status entrokl_sample_set_create(const double* points_row_major,
                                         long long n, int dim,
                                         entrokl_sample_set** out);
void entrokl_sample_set_free(entrokl_sample_set* sample);

long long entrokl_sample_set_size(const entrokl_sample_set* sample);
int entrokl_sample_set_dim(const entrokl_sample_set* sample);
/* Row-major buffer of size n*dim, owned by the handle. */
const double* entrokl_sample_set_points(const entrokl_sample_set* sample);

/* Exact i.i.d. sampling (n >= 2), deterministic given seed. */
entrokl_status entrokl_density_sample(const entrokl_density* density, long long n,
                                      unsigned long long seed,
                                      entrokl_sample_set** out);

/* Points file I/O: comma-separated, one point per row, optional header row
 * auto-detected; written files are headerless with LF endings and 17
 * significant digits. */
entrokl_status entrokl_sample_set_read_csv(const char* path, entrokl_sample_set** out);
entrokl_status entrokl_sample_set_to_csv(const entrokl_sample_set* sample,
                                         char** csv_out);

/* ------------------------------------------------------------------ */
/* Entropy estimation                                                  */

enum { ENTROKL_BACKEND_BRUTE = 0, ENTROKL_BACKEND_TREE = 1 };

typedef struct entrokl_entropy_estimate {
  double h_n;          /* nats */
  long long n;
  int dim;
  double log_rho_bar;  /* (1/N) sum log rho_i */
  int backend;         /* ENTROKL_BACKEND_* actually used */
  long long duplicates_handled;
} entrokl_entropy_estimate;

/* jitter_scale > 0 adds uniform noise in [-scale, scale]^d (seeded) before
 * estimating via the tree backend; with jitter_scale == 0 coincident points
 * are a hard error (ENTROKL_ERROR_DUPLICATE_POINTS, pairs listed in
 * entrokl_last_error()). */
entrokl_status entrokl_estimate(const entrokl_sample_set* sample, int backend,
                                double jitter_scale, unsigned long long seed,
                                entrokl_entropy_estimate* out);

/* Same, emitting the report JSON:
 * {"h_n":..,"n":..,"dim":..,"log_rho_bar":..,"method":"tree",
 *  "duplicates_handled":..,"seed":..}                                */
entrokl_status entrokl_estimate_json(const entrokl_sample_set* sample, int backend,
                                     double jitter_scale, unsigned long long seed,
                                     char** json_out);

/* Per-point contributions zeta_i; zeta_out must hold n doubles. */
entrokl_status entrokl_estimate_zeta(const entrokl_sample_set* sample, int backend,
                                     double* zeta_out);

/* ------------------------------------------------------------------ */
/* Condition functionals (reports as JSON:                             */
/* {kind, params, value, std_error, n_outer, n_inner, seed, flags})    */

entrokl_status entrokl_functional_k(const entrokl_density* density, double eps0,
                                    long long n_outer, long long n_inner,
                                    unsigned long long seed, int squared,
                                    char** json_out);
entrokl_status entrokl_functional_q(const entrokl_density* density, double eps1,
                                    double r1, long long n_outer, int grid, int mc_n,
                                    unsigned long long seed, char** json_out);
entrokl_status entrokl_functional_t(const entrokl_density* density, double eps2,
                                    double r2, long long n_outer, int grid, int mc_n,
                                    unsigned long long seed, char** json_out);
entrokl_status entrokl_condition_a(const entrokl_density* density, double p,
                                   long long n_pairs, unsigned long long seed,
                                   char** json_out);

/* Minorization check m_f(x,R) >= exp(-R^2/(2 lambda_min)) f(x) at n_probes
 * points drawn uniformly in mean_k +/- 3 sigma_k (Gaussian family only). */
entrokl_status entrokl_minorization_check(const entrokl_density* density, double r,
                                          long long n_probes, int grid, int mc_n,
                                          unsigned long long seed, char** json_out);

/* Integration-by-parts identities for the exponential CDF, by adaptive
 * quadrature. */
entrokl_status entrokl_log_moment_identities(double rate, double quad_tol,
                                             char** json_out);

/* ------------------------------------------------------------------ */
/* Conditional-law diagnostics                                         */

/* Report: {x, n, reps, ks_distance, empirical_mean_log, target_mean_log,
 *          rate, seed} */
entrokl_status entrokl_diagnose(const entrokl_density* density, const double* x,
                                int dim, long long n, long long reps,
                                unsigned long long seed, char** json_out);

entrokl_status entrokl_exact_conditional_cdf(const entrokl_density* density,
                                             const double* x, int dim, long long n,
                                             double u, double* out);

/* ------------------------------------------------------------------ */
/* Convergence experiments                                             */

/* json_out: aggregate report; csv_out (optional, may be NULL): raw per-rep
 * records "n,rep,h_n,seed". n_failed (optional) receives the number of
 * failed reps. backend is ENTROKL_BACKEND_*. */
entrokl_status entrokl_convergence_study(const entrokl_density* density,
                                         const long long* n_grid, int n_grid_len,
                                         long long reps, unsigned long long master_seed,
                                         int backend, char** json_out, char** csv_out,
                                         long long* n_failed);

entrokl_status entrokl_variance_decomposition(const entrokl_density* density,
                                              long long n, long long reps,
                                              unsigned long long master_seed,
                                              char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* ENTROKL_H */
