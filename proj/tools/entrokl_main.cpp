// entrokl command-line tool. A thin dispatcher over the shared-library C
// API: estimate entropy from a points file, generate samples, evaluate the
// condition functionals, run conditional-law diagnostics, and run
// convergence studies.
//
// Exit codes: 0 success, 2 input/flag error, 3 duplicate points,
// 4 divergence flag raised, 5 partial experiment failure.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "entrokl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDuplicates = 3;
constexpr int kExitDivergent = 4;
constexpr int kExitPartialFailure = 5;

struct StringHolder {
  char* ptr = nullptr;
  ~StringHolder() { entrokl_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct DensityHolder {
  entrokl_density* ptr = nullptr;
  ~DensityHolder() { entrokl_density_free(ptr); }
};

struct SampleHolder {
  entrokl_sample_set* ptr = nullptr;
  ~SampleHolder() { entrokl_sample_set_free(ptr); }
};

int fail(const std::string& message, int code) {
  std::cerr << "entrokl: " << message << "\n";
  return code;
}

int fail_status(entrokl_status status) {
  const std::string message = entrokl_last_error();
  switch (status) {
    case ENTROKL_ERROR_DUPLICATE_POINTS:
      return fail(message, kExitDuplicates);
    case ENTROKL_ERROR_DIVERGENT:
      return fail(message, kExitDivergent);
    default:
      return fail(message, kExitInput);
  }
}

bool write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  if (text.empty() || text.back() != '\n') out << "\n";
  return out.good();
}

int load_density(const std::string& path, DensityHolder& holder) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(path + ": cannot open density spec", kExitInput);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (entrokl_density_parse(text.c_str(), &holder.ptr) != ENTROKL_OK) {
    return fail(entrokl_last_error(), kExitInput);
  }
  return kExitOk;
}

std::vector<double> parse_vector_flag(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad number: " + item);
  }
  return out;
}

std::vector<long long> parse_grid_flag(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stoll(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad count: " + item);
  }
  return out;
}

int backend_from_flag(const std::string& name) {
  return name == "brute" ? ENTROKL_BACKEND_BRUTE : ENTROKL_BACKEND_TREE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kozachenko-Leonenko nearest-neighbor entropy estimation"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand name

  int threads = 0;
  app.add_option("--threads", threads,
                 "worker thread cap, 0 = hardware (env ENTROKL_THREADS)")
      ->envname("ENTROKL_THREADS");

  // estimate
  auto* cmd_estimate = app.add_subcommand("estimate", "estimate H_N from a points CSV");
  std::string est_points;
  std::string est_backend = "tree";
  double est_jitter = 0.0;
  unsigned long long est_seed = 0;
  std::string est_out = "-";
  cmd_estimate->add_option("points", est_points, "points CSV file")->required();
  cmd_estimate->add_option("--backend", est_backend, "nearest-neighbor backend")
      ->check(CLI::IsMember({"brute", "tree"}));
  cmd_estimate->add_option("--jitter", est_jitter, "uniform jitter scale for duplicates")
      ->check(CLI::NonNegativeNumber);
  cmd_estimate->add_option("--seed", est_seed, "jitter seed");
  cmd_estimate->add_option("--out", est_out, "output path or - for stdout");

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "draw points from a density spec");
  std::string smp_density;
  long long smp_n = 0;
  unsigned long long smp_seed = 0;
  std::string smp_out;
  cmd_sample->add_option("density", smp_density, "density JSON file")->required();
  cmd_sample->add_option("--n", smp_n, "number of points (>= 2)")->required();
  cmd_sample->add_option("--seed", smp_seed, "sampling seed");
  cmd_sample->add_option("--out", smp_out, "output CSV path")->required();

  // conditions
  auto* cmd_conditions = app.add_subcommand("conditions", "evaluate condition functionals");
  std::string cnd_density;
  std::string cnd_functional;
  double cnd_eps = 0.5;
  double cnd_r = 1.0;
  double cnd_p = 3.0;
  double cnd_rate = 1.0;
  double cnd_quad_tol = 1e-6;
  long long cnd_n_outer = 2000;
  long long cnd_n_inner = 2000;
  long long cnd_n_probes = 100;
  int cnd_grid = 64;
  int cnd_mc_n = 4096;
  unsigned long long cnd_seed = 0;
  std::string cnd_out = "-";
  cmd_conditions->add_option("density", cnd_density, "density JSON file")->required();
  cmd_conditions
      ->add_option("--functional", cnd_functional, "which functional to evaluate")
      ->required()
      ->check(CLI::IsMember({"K", "K2", "Q", "T", "A", "minorization", "lemmaG"}));
  cmd_conditions->add_option("--eps", cnd_eps, "epsilon parameter");
  cmd_conditions->add_option("--r", cnd_r, "radius parameter R");
  cmd_conditions->add_option("--p", cnd_p, "moment order for condition (A)");
  cmd_conditions->add_option("--rate", cnd_rate, "exponential rate for lemmaG");
  cmd_conditions->add_option("--quad-tol", cnd_quad_tol, "quadrature tolerance for lemmaG");
  cmd_conditions->add_option("--n-outer", cnd_n_outer, "outer Monte Carlo draws");
  cmd_conditions->add_option("--n-inner", cnd_n_inner, "inner Monte Carlo draws (K/K2)");
  cmd_conditions->add_option("--n-probes", cnd_n_probes, "probe count (minorization)");
  cmd_conditions->add_option("--grid", cnd_grid, "radius grid size for M/m search");
  cmd_conditions->add_option("--mc-n", cnd_mc_n, "ball-mass Monte Carlo draws");
  cmd_conditions->add_option("--seed", cnd_seed, "seed");
  cmd_conditions->add_option("--out", cnd_out, "output path or - for stdout");

  // diagnose
  auto* cmd_diagnose = app.add_subcommand("diagnose", "conditional-law diagnostics at x");
  std::string dgn_density;
  std::string dgn_x;
  long long dgn_n = 2048;
  long long dgn_reps = 4096;
  unsigned long long dgn_seed = 0;
  std::string dgn_out = "-";
  cmd_diagnose->add_option("density", dgn_density, "density JSON file")->required();
  cmd_diagnose->add_option("--x", dgn_x, "query point, comma separated")->required();
  cmd_diagnose->add_option("--n", dgn_n, "sample size N");
  cmd_diagnose->add_option("--reps", dgn_reps, "replications");
  cmd_diagnose->add_option("--seed", dgn_seed, "seed");
  cmd_diagnose->add_option("--out", dgn_out, "output path or - for stdout");

  // converge
  auto* cmd_converge = app.add_subcommand("converge", "bias/variance/MSE convergence study");
  std::string cnv_density;
  std::string cnv_grid = "250,500,1000,2000,4000";
  long long cnv_reps = 100;
  unsigned long long cnv_seed = 0;
  std::string cnv_backend = "tree";
  std::string cnv_out_json = "-";
  std::string cnv_out_csv;
  cmd_converge->add_option("density", cnv_density, "density JSON file")->required();
  cmd_converge->add_option("--n-grid", cnv_grid, "comma list of sample sizes");
  cmd_converge->add_option("--reps", cnv_reps, "replications per sample size");
  cmd_converge->add_option("--seed", cnv_seed, "master seed");
  cmd_converge->add_option("--backend", cnv_backend, "nearest-neighbor backend")
      ->check(CLI::IsMember({"brute", "tree"}));
  cmd_converge->add_option("--out-json", cnv_out_json, "aggregate report path or -");
  cmd_converge->add_option("--out-csv", cnv_out_csv, "per-rep CSV path (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  entrokl_set_threads(threads);

  if (cmd_estimate->parsed()) {
    SampleHolder sample;
    if (entrokl_sample_set_read_csv(est_points.c_str(), &sample.ptr) != ENTROKL_OK) {
      return fail(entrokl_last_error(), kExitInput);
    }
    StringHolder json;
    const entrokl_status status =
        entrokl_estimate_json(sample.ptr, backend_from_flag(est_backend), est_jitter,
                              est_seed, &json.ptr);
    if (status != ENTROKL_OK) return fail_status(status);
    if (!write_output(json.str(), est_out)) {
      return fail(est_out + ": cannot write output", kExitInput);
    }
    return kExitOk;
  }

  if (cmd_sample->parsed()) {
    DensityHolder density;
    if (int rc = load_density(smp_density, density); rc != kExitOk) return rc;
    SampleHolder sample;
    if (entrokl_density_sample(density.ptr, smp_n, smp_seed, &sample.ptr) != ENTROKL_OK) {
      return fail(entrokl_last_error(), kExitInput);
    }
    StringHolder csv;
    if (entrokl_sample_set_to_csv(sample.ptr, &csv.ptr) != ENTROKL_OK) {
      return fail(entrokl_last_error(), kExitInput);
    }
    std::ofstream out(smp_out, std::ios::binary);
    if (!out || !(out << csv.str())) {
      return fail(smp_out + ": cannot write CSV", kExitInput);
    }
    out.close();
    std::cout << "{\"path\":\"" << smp_out << "\",\"n\":" << smp_n
              << ",\"dim\":" << entrokl_sample_set_dim(sample.ptr)
              << ",\"seed\":" << smp_seed << "}\n";
    return kExitOk;
  }

  if (cmd_conditions->parsed()) {
    DensityHolder density;
    if (int rc = load_density(cnd_density, density); rc != kExitOk) return rc;
    StringHolder json;
    entrokl_status status = ENTROKL_OK;
    if (cnd_functional == "K" || cnd_functional == "K2") {
      if (!(cnd_eps > 0)) return fail("--eps must be > 0 for K/K2", kExitInput);
      status = entrokl_functional_k(density.ptr, cnd_eps, cnd_n_outer, cnd_n_inner,
                                    cnd_seed, cnd_functional == "K2", &json.ptr);
    } else if (cnd_functional == "Q") {
      if (!(cnd_eps > 0)) return fail("--eps must be > 0 for Q", kExitInput);
      if (!(cnd_r > 0)) return fail("--r must be > 0 for Q", kExitInput);
      status = entrokl_functional_q(density.ptr, cnd_eps, cnd_r, cnd_n_outer, cnd_grid,
                                    cnd_mc_n, cnd_seed, &json.ptr);
    } else if (cnd_functional == "T") {
      if (!(cnd_eps > 0 && cnd_eps < 1)) {
        return fail("--eps must lie in (0,1) for T", kExitInput);
      }
      if (!(cnd_r > 0)) return fail("--r must be > 0 for T", kExitInput);
      status = entrokl_functional_t(density.ptr, cnd_eps, cnd_r, cnd_n_outer, cnd_grid,
                                    cnd_mc_n, cnd_seed, &json.ptr);
    } else if (cnd_functional == "A") {
      if (!(cnd_p > 1)) return fail("--p must be > 1 for condition (A)", kExitInput);
      status = entrokl_condition_a(density.ptr, cnd_p, cnd_n_outer, cnd_seed, &json.ptr);
    } else if (cnd_functional == "minorization") {
      status = entrokl_minorization_check(density.ptr, cnd_r, cnd_n_probes, cnd_grid,
                                          cnd_mc_n, cnd_seed, &json.ptr);
    } else {  // lemmaG
      status = entrokl_log_moment_identities(cnd_rate, cnd_quad_tol, &json.ptr);
    }

    if (status != ENTROKL_OK && status != ENTROKL_ERROR_DIVERGENT) {
      return fail_status(status);
    }
    if (!write_output(json.str(), cnd_out)) {
      return fail(cnd_out + ": cannot write output", kExitInput);
    }
    return status == ENTROKL_ERROR_DIVERGENT ? kExitDivergent : kExitOk;
  }

  if (cmd_diagnose->parsed()) {
    DensityHolder density;
    if (int rc = load_density(dgn_density, density); rc != kExitOk) return rc;
    std::vector<double> x;
    try {
      x = parse_vector_flag(dgn_x);
    } catch (const std::exception& e) {
      return fail(std::string("--x: ") + e.what(), kExitInput);
    }
    if (static_cast<int>(x.size()) != entrokl_density_dim(density.ptr)) {
      return fail("--x dimension does not match the density", kExitInput);
    }
    StringHolder json;
    const entrokl_status status =
        entrokl_diagnose(density.ptr, x.data(), static_cast<int>(x.size()), dgn_n,
                         dgn_reps, dgn_seed, &json.ptr);
    if (status != ENTROKL_OK) return fail_status(status);
    if (!write_output(json.str(), dgn_out)) {
      return fail(dgn_out + ": cannot write output", kExitInput);
    }
    return kExitOk;
  }

  if (cmd_converge->parsed()) {
    DensityHolder density;
    if (int rc = load_density(cnv_density, density); rc != kExitOk) return rc;
    std::vector<long long> grid;
    try {
      grid = parse_grid_flag(cnv_grid);
    } catch (const std::exception& e) {
      return fail(std::string("--n-grid: ") + e.what(), kExitInput);
    }
    StringHolder json;
    StringHolder csv;
    long long failed = 0;
    const entrokl_status status = entrokl_convergence_study(
        density.ptr, grid.data(), static_cast<int>(grid.size()), cnv_reps, cnv_seed,
        backend_from_flag(cnv_backend), &json.ptr,
        cnv_out_csv.empty() ? nullptr : &csv.ptr, &failed);
    if (status != ENTROKL_OK) return fail_status(status);
    if (!write_output(json.str(), cnv_out_json)) {
      return fail(cnv_out_json + ": cannot write output", kExitInput);
    }
    if (!cnv_out_csv.empty()) {
      std::ofstream out(cnv_out_csv, std::ios::binary);
      if (!out || !(out << csv.str())) {
        return fail(cnv_out_csv + ": cannot write CSV", kExitInput);
      }
    }
    if (failed > 0) {
      std::cerr << "entrokl: " << failed << " replication(s) failed; see report\n";
      return kExitPartialFailure;
    }
    return kExitOk;
  }

  return fail("no subcommand", kExitInput);
}
