#pragma once

#include <cstdio>
#include <string>

namespace rodd {

/// printf-style %.<digits>g, used for every CSV number so output is byte-stable.
inline std::string format_g(double value, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

}  // namespace rodd
