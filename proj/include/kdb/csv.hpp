#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace kdb {

// 17 significant digits round-trips a double exactly; C locale keeps the
// decimal point.
inline std::string csv_num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_quote(const std::string& field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_quote(fields[i]);
  }
  os << "\r\n";
}

}  // namespace kdb
