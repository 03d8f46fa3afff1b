#include "rotrep/csv.hpp"

#include <charconv>
#include <cstdio>

#include "rotrep/error.hpp"

namespace rotrep::csv {

std::string format_exact(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string format_summary(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.14e", x);
  return buf;
}

double parse_double(std::string_view field) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorKind::IoError, "malformed number '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace rotrep::csv
