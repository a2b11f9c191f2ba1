#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace entrokl {

// An immutable N x d batch of observation points (row major) with a
// free-form provenance tag. Validated on construction: N >= 2, d >= 1,
// every coordinate finite.
class SampleSet {
 public:
  SampleSet(std::vector<double> points_row_major, std::int64_t n, int dim,
            std::string source_tag);

  std::int64_t size() const { return n_; }
  int dim() const { return dim_; }
  const std::string& source_tag() const { return source_tag_; }

  std::span<const double> row(std::int64_t i) const {
    return {points_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& points() const { return points_; }

 private:
  std::vector<double> points_;
  std::int64_t n_;
  int dim_;
  std::string source_tag_;
};

}  // namespace entrokl
