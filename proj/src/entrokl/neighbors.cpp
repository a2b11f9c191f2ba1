#include "entrokl/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "entrokl/kdtree.hpp"
#include "entrokl/parallel.hpp"

namespace entrokl {

const char* nn_method_name(NnMethod method) {
  return method == NnMethod::brute ? "brute" : "tree";
}

NnMethod nn_method_from_name(const std::string& name) {
  if (name == "brute") return NnMethod::brute;
  if (name == "tree") return NnMethod::tree;
  throw std::invalid_argument("unknown nearest-neighbor method: " + name);
}

namespace {

NnDistances finalize(const std::vector<double>& dist2,
                     const std::vector<std::int64_t>& argmin, NnMethod method) {
  const std::int64_t n = static_cast<std::int64_t>(dist2.size());
  NnDistances out;
  out.method = method;
  out.rho.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    out.rho[static_cast<std::size_t>(i)] = std::sqrt(dist2[static_cast<std::size_t>(i)]);
    if (dist2[static_cast<std::size_t>(i)] == 0.0) {
      const std::int64_t j = argmin[static_cast<std::size_t>(i)];
      out.duplicate_indices.emplace_back(std::min(i, j), std::max(i, j));
    }
  }
  std::sort(out.duplicate_indices.begin(), out.duplicate_indices.end());
  out.duplicate_indices.erase(
      std::unique(out.duplicate_indices.begin(), out.duplicate_indices.end()),
      out.duplicate_indices.end());
  return out;
}

}  // namespace

NnDistances nn_distances_brute(const SampleSet& sample) {
  const std::int64_t n = sample.size();
  const int dim = sample.dim();
  const double* pts = sample.points().data();

  std::vector<double> dist2(static_cast<std::size_t>(n));
  std::vector<std::int64_t> argmin(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t i) {
    double best = std::numeric_limits<double>::infinity();
    std::int64_t best_j = -1;
    const double* pi = pts + i * dim;
    for (std::int64_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d2 = squared_distance(pi, pts + j * dim, dim);
      if (d2 < best) {
        best = d2;
        best_j = j;
      }
    }
    dist2[static_cast<std::size_t>(i)] = best;
    argmin[static_cast<std::size_t>(i)] = best_j;
  });
  return finalize(dist2, argmin, NnMethod::brute);
}

NnDistances nn_distances_tree(const SampleSet& sample) {
  const std::int64_t n = sample.size();
  const int dim = sample.dim();
  const double* pts = sample.points().data();

  KdTree tree(pts, n, dim);
  std::vector<double> dist2(static_cast<std::size_t>(n));
  std::vector<std::int64_t> argmin(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t i) {
    auto [j, d2] = tree.nearest_excluding(pts + i * dim, i);
    dist2[static_cast<std::size_t>(i)] = d2;
    argmin[static_cast<std::size_t>(i)] = j;
  });
  return finalize(dist2, argmin, NnMethod::tree);
}

NnDistances nn_distances(const SampleSet& sample, NnMethod method) {
  return method == NnMethod::brute ? nn_distances_brute(sample)
                                   : nn_distances_tree(sample);
}

}  // namespace entrokl
