#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rotrep::csv {

/// 17 significant digits in scientific notation; parses back bit-exactly.
std::string format_exact(double x);
/// 15 significant digits in scientific notation, for human-facing summaries.
std::string format_summary(double x);

double parse_double(std::string_view field);
std::vector<std::string> split_line(std::string_view line);

}  // namespace rotrep::csv
