#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entrokl/rng.hpp"
#include "entrokl/sample_set.hpp"

namespace test_support {

inline entrokl::SampleSet random_sample(entrokl::SplitRng& rng, std::int64_t n, int dim,
                                        double lo = -10.0, double hi = 10.0) {
  std::vector<double> pts(static_cast<std::size_t>(n) * dim);
  for (double& v : pts) v = rng.uniform(lo, hi);
  return entrokl::SampleSet(std::move(pts), n, dim, "test");
}

// Random orthogonal matrix via QR of a Gaussian matrix.
inline Eigen::MatrixXd random_rotation(entrokl::SplitRng& rng, int dim) {
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

struct ProcessResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

// Runs a command with stderr folded away to a file; returns exit code and
// captured stdout.
inline ProcessResult run_process(const std::string& command) {
  ProcessResult result;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline ProcessResult run_process_with_stderr(const std::string& command) {
  ProcessResult result;
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::string cli_path() {
  const char* env = std::getenv("ENTROKL_CLI");
  return env ? env : "";
}

}  // namespace test_support
