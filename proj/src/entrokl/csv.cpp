#include "entrokl/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "entrokl/errors.hpp"
#include "entrokl/json_writer.hpp"

namespace entrokl {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool parse_number(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) return false;
  while (*end == ' ' || *end == '\t') ++end;
  return *end == '\0';
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

SampleSet parse_points_csv(const std::string& text, const std::string& origin) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(trim(line));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::vector<double> values;
  int dim = -1;
  std::int64_t rows = 0;

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    const std::int64_t line_no = static_cast<std::int64_t>(li) + 1;
    if (line.empty()) {
      throw ParseError(origin + ": line " + std::to_string(line_no) + " is empty");
    }
    const std::vector<std::string> fields = split_fields(line);

    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (!parse_number(trim(fields[k]), row[k])) {
        numeric = false;
        break;
      }
    }

    if (!numeric) {
      if (li == 0) continue;  // non-numeric first row: header
      throw ParseError(origin + ": line " + std::to_string(line_no) +
                       " contains a non-numeric field");
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw ParseError(origin + ": line " + std::to_string(line_no) +
                         " contains a non-finite value");
      }
    }

    if (dim < 0) {
      dim = static_cast<int>(fields.size());
    } else if (static_cast<int>(fields.size()) != dim) {
      throw ParseError(origin + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " columns, expected " +
                       std::to_string(dim));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++rows;
  }

  if (rows < 2) {
    throw ParseError(origin + ": need at least 2 data rows, found " +
                     std::to_string(rows));
  }
  try {
    return SampleSet(std::move(values), rows, dim, origin);
  } catch (const std::invalid_argument& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

SampleSet read_points_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_points_csv(buffer.str(), path);
}

std::string points_to_csv(const SampleSet& sample) {
  std::string out;
  const std::int64_t n = sample.size();
  const int dim = sample.dim();
  for (std::int64_t i = 0; i < n; ++i) {
    const auto row = sample.row(i);
    for (int k = 0; k < dim; ++k) {
      if (k) out += ',';
      out += format_double(row[static_cast<std::size_t>(k)]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace entrokl
