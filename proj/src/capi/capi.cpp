#include "entrokl.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "entrokl/conditions.hpp"
#include "entrokl/constants.hpp"
#include "entrokl/csv.hpp"
#include "entrokl/density.hpp"
#include "entrokl/diagnostics.hpp"
#include "entrokl/errors.hpp"
#include "entrokl/estimator.hpp"
#include "entrokl/experiments.hpp"
#include "entrokl/parallel.hpp"
#include "entrokl/reports.hpp"
#include "entrokl/sample_set.hpp"

struct entrokl_density {
  entrokl::AnalyticDensity density;
};

struct entrokl_sample_set {
  entrokl::SampleSet sample;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Translates C++ exceptions at the boundary into status codes.
template <typename Fn>
entrokl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const entrokl::DuplicatePointsError& e) {
    set_error(e.what());
    return ENTROKL_ERROR_DUPLICATE_POINTS;
  } catch (const entrokl::ParseError& e) {
    set_error(e.what());
    return ENTROKL_ERROR_PARSE;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return ENTROKL_ERROR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return ENTROKL_ERROR_RUNTIME;
  } catch (const std::exception& e) {
    set_error(e.what());
    return ENTROKL_ERROR_RUNTIME;
  }
}

entrokl_status require(bool ok, const char* message) {
  if (ok) return ENTROKL_OK;
  set_error(message);
  return ENTROKL_ERROR_INVALID_ARGUMENT;
}

entrokl::NnMethod backend_from_int(int backend) {
  switch (backend) {
    case ENTROKL_BACKEND_BRUTE: return entrokl::NnMethod::brute;
    case ENTROKL_BACKEND_TREE: return entrokl::NnMethod::tree;
  }
  throw std::invalid_argument("backend must be 0 (brute) or 1 (tree)");
}

}  // namespace

extern "C" {

const char* entrokl_version(void) { return "0.1.0"; }

const char* entrokl_last_error(void) { return g_last_error.c_str(); }

void entrokl_string_free(char* s) { delete[] s; }

void entrokl_set_threads(int n) { entrokl::set_max_threads(n); }

double entrokl_euler_gamma(void) { return entrokl::kEulerGamma; }

double entrokl_gamma_tilde(void) { return entrokl::kGammaTilde; }

entrokl_status entrokl_unit_ball_volume(int dim, double* out) {
  if (entrokl_status s = require(out != nullptr, "out must not be null"); s != ENTROKL_OK) return s;
  return guarded([&] {
    *out = entrokl::unit_ball_volume(dim);
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_g_function(double t, double* out) {
  if (entrokl_status s = require(out != nullptr, "out must not be null"); s != ENTROKL_OK) return s;
  return guarded([&] {
    *out = entrokl::g_function(t);
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_density_parse(const char* json_text, entrokl_density** out) {
  if (entrokl_status s = require(json_text && out, "json_text and out must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *out = new entrokl_density{entrokl::AnalyticDensity::from_json(json_text)};
    return ENTROKL_OK;
  });
}

void entrokl_density_free(entrokl_density* density) { delete density; }

int entrokl_density_dim(const entrokl_density* density) {
  return density ? density->density.dim() : 0;
}

const char* entrokl_density_family(const entrokl_density* density) {
  return density ? entrokl::density_family_name(density->density.family()) : "";
}

entrokl_status entrokl_density_to_json(const entrokl_density* density, char** json_out) {
  if (entrokl_status s = require(density && json_out, "density and json_out must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *json_out = dup_string(density->density.to_json());
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_density_pdf(const entrokl_density* density, const double* x,
                                   int dim, double* out) {
  if (entrokl_status s = require(density && x && out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *out = density->density.pdf({x, static_cast<std::size_t>(dim)});
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_density_analytic_entropy(const entrokl_density* density,
                                                double* out) {
  if (entrokl_status s = require(density && out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *out = density->density.analytic_entropy();
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_sample_set_create(const double* points_row_major, long long n,
                                         int dim, entrokl_sample_set** out) {
  if (entrokl_status s = require(points_row_major && out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    if (n < 2 || dim < 1) throw std::invalid_argument("need n >= 2 and dim >= 1");
    std::vector<double> buffer(points_row_major,
                               points_row_major + static_cast<std::size_t>(n) * dim);
    *out = new entrokl_sample_set{
        entrokl::SampleSet(std::move(buffer), n, dim, "capi")};
    return ENTROKL_OK;
  });
}

void entrokl_sample_set_free(entrokl_sample_set* sample) { delete sample; }

long long entrokl_sample_set_size(const entrokl_sample_set* sample) {
  return sample ? sample->sample.size() : 0;
}

int entrokl_sample_set_dim(const entrokl_sample_set* sample) {
  return sample ? sample->sample.dim() : 0;
}

const double* entrokl_sample_set_points(const entrokl_sample_set* sample) {
  return sample ? sample->sample.points().data() : nullptr;
}

entrokl_status entrokl_density_sample(const entrokl_density* density, long long n,
                                      unsigned long long seed,
                                      entrokl_sample_set** out) {
  if (entrokl_status s = require(density && out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *out = new entrokl_sample_set{density->density.sample(n, seed)};
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_sample_set_read_csv(const char* path, entrokl_sample_set** out) {
  if (entrokl_status s = require(path && out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *out = new entrokl_sample_set{entrokl::read_points_csv(path)};
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_sample_set_to_csv(const entrokl_sample_set* sample,
                                         char** csv_out) {
  if (entrokl_status s = require(sample && csv_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *csv_out = dup_string(entrokl::points_to_csv(sample->sample));
    return ENTROKL_OK;
  });
}

namespace {

entrokl_status run_estimate(const entrokl_sample_set* sample, int backend,
                            double jitter_scale, unsigned long long seed,
                            entrokl::EntropyEstimate& est,
                            long long& duplicates_handled) {
  return guarded([&] {
    if (jitter_scale > 0.0) {
      entrokl::JitterEstimate jittered =
          entrokl::kl_entropy_with_jitter(sample->sample, jitter_scale, seed);
      est = std::move(jittered.estimate);
      duplicates_handled = jittered.duplicates_handled;
    } else {
      est = entrokl::kl_entropy(
          sample->sample,
          entrokl::nn_distances(sample->sample, backend_from_int(backend)));
      duplicates_handled = 0;
    }
    return ENTROKL_OK;
  });
}

}  // namespace

entrokl_status entrokl_estimate(const entrokl_sample_set* sample, int backend,
                                double jitter_scale, unsigned long long seed,
                                entrokl_entropy_estimate* out) {
  if (entrokl_status s = require(sample && out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  entrokl::EntropyEstimate est;
  long long duplicates = 0;
  const entrokl_status status = run_estimate(sample, backend, jitter_scale, seed, est, duplicates);
  if (status != ENTROKL_OK) return status;
  out->h_n = est.h_n;
  out->n = est.n;
  out->dim = est.dim;
  out->log_rho_bar = est.log_rho_bar;
  out->backend = est.method == entrokl::NnMethod::brute ? ENTROKL_BACKEND_BRUTE
                                                        : ENTROKL_BACKEND_TREE;
  out->duplicates_handled = duplicates;
  return ENTROKL_OK;
}

entrokl_status entrokl_estimate_json(const entrokl_sample_set* sample, int backend,
                                     double jitter_scale, unsigned long long seed,
                                     char** json_out) {
  if (entrokl_status s = require(sample && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  entrokl::EntropyEstimate est;
  long long duplicates = 0;
  const entrokl_status status = run_estimate(sample, backend, jitter_scale, seed, est, duplicates);
  if (status != ENTROKL_OK) return status;
  return guarded([&] {
    *json_out = dup_string(entrokl::estimate_report_json(est, duplicates, seed));
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_estimate_zeta(const entrokl_sample_set* sample, int backend,
                                     double* zeta_out) {
  if (entrokl_status s = require(sample && zeta_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    const entrokl::EntropyEstimate est = entrokl::kl_entropy(
        sample->sample,
        entrokl::nn_distances(sample->sample, backend_from_int(backend)));
    std::memcpy(zeta_out, est.zeta.data(), est.zeta.size() * sizeof(double));
    return ENTROKL_OK;
  });
}

namespace {

entrokl_status emit_functional(const entrokl::FunctionalEstimate& estimate,
                               char** json_out) {
  *json_out = dup_string(entrokl::functional_report_json(estimate));
  if (estimate.divergent) {
    set_error("divergence flag raised; see report flags");
    return ENTROKL_ERROR_DIVERGENT;
  }
  return ENTROKL_OK;
}

}  // namespace

entrokl_status entrokl_functional_k(const entrokl_density* density, double eps0,
                                    long long n_outer, long long n_inner,
                                    unsigned long long seed, int squared,
                                    char** json_out) {
  if (entrokl_status s = require(density && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    return emit_functional(entrokl::functional_k(density->density, eps0, n_outer,
                                                 n_inner, seed, squared != 0),
                           json_out);
  });
}

entrokl_status entrokl_functional_q(const entrokl_density* density, double eps1,
                                    double r1, long long n_outer, int grid, int mc_n,
                                    unsigned long long seed, char** json_out) {
  if (entrokl_status s = require(density && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    return emit_functional(entrokl::functional_q(density->density, eps1, r1, n_outer,
                                                 grid, mc_n, seed),
                           json_out);
  });
}

entrokl_status entrokl_functional_t(const entrokl_density* density, double eps2,
                                    double r2, long long n_outer, int grid, int mc_n,
                                    unsigned long long seed, char** json_out) {
  if (entrokl_status s = require(density && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    return emit_functional(entrokl::functional_t(density->density, eps2, r2, n_outer,
                                                 grid, mc_n, seed),
                           json_out);
  });
}

entrokl_status entrokl_condition_a(const entrokl_density* density, double p,
                                   long long n_pairs, unsigned long long seed,
                                   char** json_out) {
  if (entrokl_status s = require(density && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    return emit_functional(
        entrokl::check_condition_a(density->density, p, n_pairs, seed), json_out);
  });
}

entrokl_status entrokl_minorization_check(const entrokl_density* density, double r,
                                          long long n_probes, int grid, int mc_n,
                                          unsigned long long seed, char** json_out) {
  if (entrokl_status s = require(density && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    const auto probes =
        entrokl::default_minorization_probes(density->density, n_probes, seed);
    const auto report = entrokl::check_gaussian_minorization(density->density, r,
                                                             probes, grid, mc_n, seed);
    *json_out = dup_string(entrokl::minorization_report_json(report));
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_log_moment_identities(double rate, double quad_tol,
                                             char** json_out) {
  if (entrokl_status s = require(json_out != nullptr, "json_out must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    const auto report = entrokl::verify_log_moment_identities(rate, quad_tol);
    *json_out = dup_string(entrokl::log_moment_report_json(report));
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_diagnose(const entrokl_density* density, const double* x,
                                int dim, long long n, long long reps,
                                unsigned long long seed, char** json_out) {
  if (entrokl_status s = require(density && x && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    const auto report = entrokl::conditional_law_report(
        density->density, {x, static_cast<std::size_t>(dim)}, n, reps, seed);
    *json_out = dup_string(entrokl::conditional_law_report_json(report));
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_exact_conditional_cdf(const entrokl_density* density,
                                             const double* x, int dim, long long n,
                                             double u, double* out) {
  if (entrokl_status s = require(density && x && out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    *out = entrokl::exact_conditional_cdf(density->density,
                                          {x, static_cast<std::size_t>(dim)}, n, u);
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_convergence_study(const entrokl_density* density,
                                         const long long* n_grid, int n_grid_len,
                                         long long reps, unsigned long long master_seed,
                                         int backend, char** json_out, char** csv_out,
                                         long long* n_failed) {
  if (entrokl_status s = require(density && n_grid && json_out && n_grid_len > 0,
                                 "density, n_grid and json_out are required");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    std::vector<std::int64_t> grid(n_grid, n_grid + n_grid_len);
    const auto report = entrokl::convergence_study(density->density, grid, reps,
                                                   master_seed, backend_from_int(backend));
    *json_out = dup_string(entrokl::convergence_report_json(report));
    if (csv_out) *csv_out = dup_string(entrokl::convergence_report_csv(report));
    if (n_failed) *n_failed = static_cast<long long>(report.failures.size());
    return ENTROKL_OK;
  });
}

entrokl_status entrokl_variance_decomposition(const entrokl_density* density,
                                              long long n, long long reps,
                                              unsigned long long master_seed,
                                              char** json_out) {
  if (entrokl_status s = require(density && json_out, "arguments must not be null");
      s != ENTROKL_OK) {
    return s;
  }
  return guarded([&] {
    const auto report =
        entrokl::variance_decomposition(density->density, n, reps, master_seed);
    *json_out = dup_string(entrokl::variance_decomposition_json(report));
    return ENTROKL_OK;
  });
}

}  // extern "C"
