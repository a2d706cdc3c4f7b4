#pragma once

#include <charconv>
#include <string>

namespace spinlab {

/// Shortest decimal form that parses back to exactly the same double.
/// Keeps emitted programs, CSV and JSON byte-stable across runs.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace spinlab
