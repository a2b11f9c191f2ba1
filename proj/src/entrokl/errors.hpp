#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace entrokl {

using IndexPair = std::pair<std::int64_t, std::int64_t>;

// Raised when an entropy estimate is requested for a sample containing
// coincident points (some rho_i = 0, so log rho_i is undefined).
class DuplicatePointsError : public std::runtime_error {
 public:
  explicit DuplicatePointsError(std::vector<IndexPair> pairs)
      : std::runtime_error(compose(pairs)), pairs_(std::move(pairs)) {}

  const std::vector<IndexPair>& duplicate_indices() const { return pairs_; }

 private:
  static std::string compose(const std::vector<IndexPair>& pairs) {
    std::string msg = "duplicate points at zero distance: ";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i) msg += ", ";
      msg += "(" + std::to_string(pairs[i].first) + "," +
             std::to_string(pairs[i].second) + ")";
      if (i >= 15 && pairs.size() > 16) {
        msg += ", ... " + std::to_string(pairs.size()) + " pairs total";
        break;
      }
    }
    return msg;
  }

  std::vector<IndexPair> pairs_;
};

// Input text could not be parsed (CSV points file or density JSON).
// The message names the offending line or field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entrokl
