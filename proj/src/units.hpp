#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

// Conversions between the customary units used in scenario files and SI.
// `to` prefers the shortest decimal (up to 15 significant digits) that converts
// back to exactly the SI input, then the few doubles nearest the converted
// value, so files round-trip bit for bit.
namespace dtof::units {

namespace detail {

template <typename From>
double invert_exact(double si, double guess, From from) {
  if (!std::isfinite(guess)) return guess;
  for (int digits = 1; digits <= 15; ++digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*g", digits, guess);
    const double candidate = std::strtod(buf, nullptr);
    if (from(candidate) == si) return candidate;
  }
  if (from(guess) == si) return guess;
  double up = guess;
  double down = guess;
  for (int i = 0; i < 4; ++i) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    if (from(up) == si) return up;
    if (from(down) == si) return down;
  }
  return guess;
}

}  // namespace detail

/// SI = file value * factor (multiply) or file value / factor (divide); the
/// factor is always an exact integer power of ten.
struct Scale {
  double factor;
  bool multiply;

  double from(double v) const { return multiply ? v * factor : v / factor; }
  double to(double si) const {
    const double guess = multiply ? si / factor : si * factor;
    return detail::invert_exact(si, guess, [this](double v) { return from(v); });
  }
};

inline constexpr Scale percent{100.0, false};
inline constexpr Scale milli{1e3, false};
inline constexpr Scale micro{1e6, false};
inline constexpr Scale nano{1e9, false};
inline constexpr Scale kilo{1e3, true};
inline constexpr Scale mega{1e6, true};

struct Angle {
  double from(double deg) const { return deg * (std::numbers::pi / 180.0); }
  double to(double rad) const {
    return detail::invert_exact(rad, rad * (180.0 / std::numbers::pi),
                                [this](double v) { return from(v); });
  }
};

inline constexpr Angle degrees{};

}  // namespace dtof::units
