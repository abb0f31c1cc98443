#pragma once

#include "dtof/constants.hpp"

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace dtof {

/// Geometry of a single measurement. Angles in radians.
struct SceneGeometry {
  double range_m = 100.0;
  double incidence_angle_rad = 0.0;  // receive direction vs. target normal
  double elevation_angle_rad = 0.0;  // argument of the aperture model
  double sun_angle_rad = constants::pi / 3.0;  // solar direction vs. target normal

  bool operator==(const SceneGeometry&) const = default;
};

enum class AtmosphereMode { fixed_transmittance, extinction };

struct AtmosphereModel {
  AtmosphereMode mode = AtmosphereMode::fixed_transmittance;
  double one_way_transmittance = 0.98;
  double extinction_coeff_per_m = 0.0;

  static AtmosphereModel fixed(double transmittance) {
    return {AtmosphereMode::fixed_transmittance, transmittance, 0.0};
  }
  static AtmosphereModel extinction(double alpha_per_m) {
    return {AtmosphereMode::extinction, 1.0, alpha_per_m};
  }

  bool operator==(const AtmosphereModel&) const = default;
};

enum class ApertureModel { constant, cosine };

struct ReceiverOptics {
  double aperture_radius_m = 0.025;
  double focal_length_m = 0.03;
  double detector_radius_m = 0.1e-3;
  double laser_efficiency = 0.7206;
  double sun_efficiency = 0.7986;
  ApertureModel aperture_model = ApertureModel::constant;

  bool operator==(const ReceiverOptics&) const = default;
};

/// Lambertian target larger than the laser spot.
struct TargetModel {
  double reflectivity = 0.1;
  bool extends_beyond_spot = true;

  bool operator==(const TargetModel&) const = default;
};

struct LaserParams {
  double peak_power_w = 45.0;
  double wavelength_m = 905e-9;
  double pulse_fwhm_s = 6e-9;
  double repetition_hz = 50e3;  // not used by the link budget

  double photon_energy_j() const { return photon_energy(wavelength_m); }

  bool operator==(const LaserParams&) const = default;
};

struct SpectrumRow {
  double wavelength_nm = 0.0;
  double irradiance_w_m2_nm = 0.0;
  double transmittance = 0.0;

  bool operator==(const SpectrumRow&) const = default;
};

enum class SolarMode { direct_irradiance, spectrum_integral, illuminance_scaled };

struct SolarModel {
  SolarMode mode = SolarMode::direct_irradiance;
  double in_band_irradiance_w_m2 = 29.4;
  std::vector<SpectrumRow> spectrum;
  std::string spectrum_source;  // file the table was read from, if any
  double illuminance_klux = 100.0;
  double reference_klux = 100.0;
  double reference_irradiance_w_m2 = 29.4;

  static SolarModel direct(double irradiance_w_m2) {
    SolarModel s;
    s.mode = SolarMode::direct_irradiance;
    s.in_band_irradiance_w_m2 = irradiance_w_m2;
    return s;
  }
  static SolarModel illuminance(double klux, double reference_klux = 100.0,
                                double reference_irradiance_w_m2 = 29.4) {
    SolarModel s;
    s.mode = SolarMode::illuminance_scaled;
    s.illuminance_klux = klux;
    s.reference_klux = reference_klux;
    s.reference_irradiance_w_m2 = reference_irradiance_w_m2;
    return s;
  }
  static SolarModel from_spectrum(std::vector<SpectrumRow> rows) {
    SolarModel s;
    s.mode = SolarMode::spectrum_integral;
    s.spectrum = std::move(rows);
    return s;
  }

  bool operator==(const SolarModel&) const = default;
};

// Validation. Each throws ConfigError naming the violated field.
void validate(const SceneGeometry& scene);
void validate(const AtmosphereModel& atm);
void validate(const ReceiverOptics& optics);
void validate(const TargetModel& target);
void validate(const LaserParams& laser);
void validate(const SolarModel& solar);

/// tau_a: the constant in fixed mode, exp(-alpha R) in extinction mode.
double one_way_transmittance(const AtmosphereModel& atm, double range_m);

/// Effective receiver pupil area A(theta_r) in m^2.
double effective_aperture(const ReceiverOptics& optics, double theta_r);

/// Half field of view arctan(r_pD / f).
double fov_half_angle(const ReceiverOptics& optics);

/// Peak echo power on the detector:
///   P_r = tau_a^2 eta_r rho P_t A(theta_r) cos(theta) / (pi R^2)
double echo_power(const SceneGeometry& scene, const AtmosphereModel& atm,
                  const ReceiverOptics& optics, const TargetModel& target,
                  const LaserParams& laser);

/// Echo power over a grid of ranges (fixed scene angles).
Eigen::ArrayXd echo_power(const Eigen::ArrayXd& ranges_m, const SceneGeometry& scene,
                          const AtmosphereModel& atm, const ReceiverOptics& optics,
                          const TargetModel& target, const LaserParams& laser);

/// In-band solar irradiance E_sun in W/m^2.
double sun_equivalent_irradiance(const SolarModel& solar);

/// Solar background power on the detector:
///   P_rs = E_sun eta_rs tau_a rho A(theta_r) (r_pD / f)^2 cos(theta_s)
/// A single one-way transmittance is applied.
double background_power(const SceneGeometry& scene, const AtmosphereModel& atm,
                        const ReceiverOptics& optics, const TargetModel& target,
                        const SolarModel& solar);

/// Reads a `wavelength_nm,irradiance_w_m2_nm,transmittance` CSV table.
std::vector<SpectrumRow> read_spectrum_csv(const std::filesystem::path& path);

}  // namespace dtof
