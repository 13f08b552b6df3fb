#pragma once

#include <charconv>
#include <string>

namespace rg {

// Shortest decimal string that round-trips to the same double. Locale-free,
// so CSV output is byte-stable across machines.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int precision) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

}  // namespace rg
