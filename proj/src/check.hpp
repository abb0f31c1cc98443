#pragma once

#include "dtof/errors.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

namespace dtof::detail {

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void require(bool ok, std::string_view field, std::string_view rule, double value) {
  if (!ok) {
    throw ConfigError(std::string(field) + ": must be " + std::string(rule) + " (got " +
                      format_number(value) + ")");
  }
}

inline bool finite(double v) { return std::isfinite(v); }

}  // namespace dtof::detail
