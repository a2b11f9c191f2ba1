#include "entrokl/sample_set.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace entrokl {

SampleSet::SampleSet(std::vector<double> points_row_major, std::int64_t n, int dim,
                     std::string source_tag)
    : points_(std::move(points_row_major)),
      n_(n),
      dim_(dim),
      source_tag_(std::move(source_tag)) {
  if (n_ < 2) throw std::invalid_argument("SampleSet: need at least 2 points");
  if (dim_ < 1) throw std::invalid_argument("SampleSet: dimension must be >= 1");
  if (points_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("SampleSet: buffer size does not match n*dim");
  }
  for (double v : points_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("SampleSet: coordinates must be finite");
    }
  }
}

}  // namespace entrokl
