#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace entrokl {

// Exact nearest-neighbor index over a fixed point set. Axis-aligned median
// splits on the widest axis, leaf size 16. Search is branch-and-bound with
// full squared-distance accumulation, so the distance returned for the
// winning pair is bit-identical to a brute-force evaluation of that pair.
class KdTree {
 public:
  KdTree(const double* points_row_major, std::int64_t n, int dim,
         int leaf_size = 16);

  // Nearest point to `query` among the indexed points, excluding index
  // `skip` (pass -1 to consider all). Returns {index, squared distance}.
  std::pair<std::int64_t, double> nearest_excluding(const double* query,
                                                    std::int64_t skip) const;

 private:
  struct Node {
    int axis = -1;       // -1 marks a leaf
    double split = 0.0;  // split coordinate for interior nodes
    std::int64_t left = -1;
    std::int64_t right = -1;
    std::int64_t begin = 0;  // leaf range into order_
    std::int64_t end = 0;
  };

  std::int64_t build(std::int64_t begin, std::int64_t end);
  void search(std::int64_t node, const double* query, std::int64_t skip,
              std::int64_t& best_index, double& best_dist2) const;

  const double* points_;
  std::int64_t n_;
  int dim_;
  int leaf_size_;
  std::vector<std::int64_t> order_;
  std::vector<Node> nodes_;
};

// Full squared Euclidean distance with fixed accumulation order; shared by
// the brute and tree backends so both report identical values.
inline double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

}  // namespace entrokl
