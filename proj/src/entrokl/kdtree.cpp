#include "entrokl/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace entrokl {

KdTree::KdTree(const double* points_row_major, std::int64_t n, int dim,
               int leaf_size)
    : points_(points_row_major), n_(n), dim_(dim), leaf_size_(std::max(leaf_size, 1)) {
  if (n_ < 1 || dim_ < 1) throw std::invalid_argument("KdTree: empty input");
  order_.resize(static_cast<std::size_t>(n_));
  std::iota(order_.begin(), order_.end(), std::int64_t{0});
  nodes_.reserve(static_cast<std::size_t>(2 * (n_ / leaf_size_ + 1)));
  build(0, n_);
}

std::int64_t KdTree::build(std::int64_t begin, std::int64_t end) {
  const std::int64_t node_id = static_cast<std::int64_t>(nodes_.size());
  nodes_.emplace_back();

  if (end - begin <= leaf_size_) {
    nodes_[node_id].begin = begin;
    nodes_[node_id].end = end;
    return node_id;
  }

  // Split on the widest axis.
  int axis = 0;
  double widest = -1.0;
  for (int k = 0; k < dim_; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = begin; i < end; ++i) {
      const double v = points_[order_[i] * dim_ + k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = k;
    }
  }

  const std::int64_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end,
                   [this, axis](std::int64_t a, std::int64_t b) {
                     return points_[a * dim_ + axis] < points_[b * dim_ + axis];
                   });

  const double split = points_[order_[mid] * dim_ + axis];
  const std::int64_t left = build(begin, mid);
  const std::int64_t right = build(mid, end);
  nodes_[node_id].axis = axis;
  nodes_[node_id].split = split;
  nodes_[node_id].left = left;
  nodes_[node_id].right = right;
  return node_id;
}

std::pair<std::int64_t, double> KdTree::nearest_excluding(const double* query,
                                                          std::int64_t skip) const {
  std::int64_t best_index = -1;
  double best_dist2 = std::numeric_limits<double>::infinity();
  search(0, query, skip, best_index, best_dist2);
  return {best_index, best_dist2};
}

void KdTree::search(std::int64_t node, const double* query, std::int64_t skip,
                    std::int64_t& best_index, double& best_dist2) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  if (nd.axis < 0) {
    for (std::int64_t i = nd.begin; i < nd.end; ++i) {
      const std::int64_t idx = order_[static_cast<std::size_t>(i)];
      if (idx == skip) continue;
      const double d2 = squared_distance(query, points_ + idx * dim_, dim_);
      if (d2 < best_dist2) {
        best_dist2 = d2;
        best_index = idx;
      }
    }
    return;
  }

  const double delta = query[nd.axis] - nd.split;
  const std::int64_t near = delta <= 0.0 ? nd.left : nd.right;
  const std::int64_t far = delta <= 0.0 ? nd.right : nd.left;
  search(near, query, skip, best_index, best_dist2);
  if (delta * delta < best_dist2) {
    search(far, query, skip, best_index, best_dist2);
  }
}

}  // namespace entrokl
