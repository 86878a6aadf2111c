#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qeswkb {

// Shortest round-trip decimal form of v, capped at max_significant digits.
std::string format_number(double v, int max_significant = 15);

// Strict decimal parse (whole string must be consumed); throws Error{Parse}.
double parse_number(std::string_view text, std::string_view context);
int parse_integer(std::string_view text, std::string_view context);

// Comma-separated list of numbers.
std::vector<double> parse_number_list(std::string_view text, std::string_view context);

// Writes one delimited row terminated by '\n'.
std::string join_row(const std::vector<std::string>& cells, char sep);

}  // namespace qeswkb
