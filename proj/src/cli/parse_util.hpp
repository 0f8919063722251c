#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "asymloss/cli/inputs.hpp"

namespace asymloss::cli::detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Whole-field numeric parse; rejects trailing garbage and non-finite values.
inline bool try_parse_number(std::string_view text, double& value) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, t.data() + t.size(), value);
  return res.ec == std::errc() && res.ptr == t.data() + t.size() && std::isfinite(value);
}

inline double parse_number(std::string_view text, const std::string& what) {
  double v = 0.0;
  if (!try_parse_number(text, v)) {
    throw InputError("'" + std::string(text) + "' is not a number (" + what + ")");
  }
  return v;
}

}  // namespace asymloss::cli::detail
