#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entrokl/errors.hpp"
#include "entrokl/sample_set.hpp"

namespace entrokl {

enum class NnMethod { brute, tree };

const char* nn_method_name(NnMethod method);
NnMethod nn_method_from_name(const std::string& name);

// Per-point distance to the nearest other sample point. duplicate_indices
// is nonempty exactly when some rho[i] == 0; pairs are normalized (i < j)
// and deduplicated.
struct NnDistances {
  std::vector<double> rho;
  NnMethod method = NnMethod::brute;
  std::vector<IndexPair> duplicate_indices;
};

// Exact all-pairs scan, O(N^2 d). The reference implementation.
NnDistances nn_distances_brute(const SampleSet& sample);

// Exact kd-tree accelerated search; same values as the brute scan.
NnDistances nn_distances_tree(const SampleSet& sample);

NnDistances nn_distances(const SampleSet& sample, NnMethod method);

}  // namespace entrokl
