#pragma once

#include <string>

#include "entrokl/sample_set.hpp"

namespace entrokl {

// Points file: comma delimiter, '.' decimal, one point per row, d numeric
// columns, optional single header row (detected when the first row is not
// fully numeric). Throws ParseError naming the offending line.
SampleSet read_points_csv(const std::string& path);
SampleSet parse_points_csv(const std::string& text, const std::string& origin);

// Headerless CSV, 17 significant digits, LF line endings.
std::string points_to_csv(const SampleSet& sample);

}  // namespace entrokl
