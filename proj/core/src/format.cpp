#include "qeswkb/format.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include "qeswkb/errors.hpp"

namespace qeswkb {

namespace {

int significant_digits(std::string_view s) {
  int digits = 0;
  bool leading = true;
  for (char ch : s) {
    if (ch == 'e' || ch == 'E') break;
    if (ch < '0' || ch > '9') continue;
    if (leading && ch == '0') continue;
    leading = false;
    ++digits;
  }
  return digits;
}

}  // namespace

std::string format_number(double v, int max_significant) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string_view shortest(buf, static_cast<std::size_t>(res.ptr - buf));
  if (significant_digits(shortest) <= max_significant) return std::string(shortest);
  res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, max_significant);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view context) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    fail(ErrorKind::Parse, std::string(context) + ": expected a number, got '" + std::string(text) + "'");
  return v;
}

int parse_integer(std::string_view text, std::string_view context) {
  int v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    fail(ErrorKind::Parse, std::string(context) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view context) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    out.push_back(parse_number(item, context));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join_row(const std::vector<std::string>& cells, char sep) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += sep;
    row += cells[i];
  }
  row += '\n';
  return row;
}

}  // namespace qeswkb
