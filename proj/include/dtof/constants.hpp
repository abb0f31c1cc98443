#pragma once

#include <numbers>

namespace dtof::constants {

// SI 2019 exact values.
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double speed_of_light = 299792458.0;         // m / s
inline constexpr double boltzmann = 1.380649e-23;             // J / K
inline constexpr double pi = std::numbers::pi;

}  // namespace dtof::constants

namespace dtof {

/// Photon energy h*nu for a vacuum wavelength in metres.
inline double photon_energy(double wavelength_m) {
  return constants::planck * constants::speed_of_light / wavelength_m;
}

/// Direct time-of-flight: target distance from the round-trip time.
inline double range_from_round_trip(double round_trip_s) {
  return 0.5 * constants::speed_of_light * round_trip_s;
}

inline double round_trip_from_range(double range_m) {
  return 2.0 * range_m / constants::speed_of_light;
}

}  // namespace dtof
