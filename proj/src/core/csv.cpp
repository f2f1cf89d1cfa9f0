#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "core/ingest.hpp"

namespace rankgauge {
namespace {

double parse_field(const std::string& field, std::size_t row, std::size_t col) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;

  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || begin == end) {
    fail(ErrorCode::ParseError, "cannot parse '" + field + "' at row " +
                                    std::to_string(row) + ", col " + std::to_string(col));
  }
  if (!std::isfinite(value)) {
    fail(ErrorCode::NonFiniteData, "non-finite value at row " + std::to_string(row) +
                                       ", col " + std::to_string(col));
  }
  return value;
}

}  // namespace

EmbeddingMatrix load_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool skip = has_header && line_no == 0;
    ++line_no;
    if (skip) continue;
    if (line.empty() && in.peek() == EOF) break;  // trailing newline

    std::vector<double> row;
    std::size_t start = 0, col = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      const std::string field =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      row.push_back(parse_field(field, rows.size(), col));
      ++col;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }

    if (width == 0) {
      width = row.size();
    } else if (row.size() != width) {
      fail(ErrorCode::RaggedRows, "row " + std::to_string(rows.size()) + " has " +
                                      std::to_string(row.size()) + " fields, expected " +
                                      std::to_string(width));
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty() || width == 0) {
    fail(ErrorCode::ParseError, "no data rows in " + path);
  }

  EmbeddingMatrix m;
  m.dtype = Dtype::F64;
  m.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      m.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  validate_matrix(m);
  return m;
}

}  // namespace rankgauge
