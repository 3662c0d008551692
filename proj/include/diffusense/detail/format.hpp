#pragma once

#include <charconv>
#include <string>

namespace diffusense::detail {

/// Shortest decimal string that round-trips the value. CSV outputs always use
/// '.' as the decimal separator, independent of locale.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return {buf, res.ptr};
}

}  // namespace diffusense::detail
