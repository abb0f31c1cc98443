#include "dtof/scene_link.hpp"

#include "check.hpp"
#include "dtof/numerics.hpp"

#include <cmath>

namespace dtof {

using detail::require;

void validate(const SceneGeometry& scene) {
  require(scene.range_m > 0 && std::isfinite(scene.range_m), "scene.range_m", "> 0",
          scene.range_m);
  require(scene.incidence_angle_rad >= 0 && scene.incidence_angle_rad < constants::pi / 2,
          "scene.incidence_angle", "in [0, 90) degrees", scene.incidence_angle_rad);
  require(std::abs(scene.elevation_angle_rad) < constants::pi / 2, "scene.elevation_angle",
          "in (-90, 90) degrees", scene.elevation_angle_rad);
  require(scene.sun_angle_rad >= 0 && scene.sun_angle_rad < constants::pi / 2,
          "scene.sun_angle", "in [0, 90) degrees", scene.sun_angle_rad);
}

void validate(const AtmosphereModel& atm) {
  if (atm.mode == AtmosphereMode::fixed_transmittance) {
    require(atm.one_way_transmittance > 0 && atm.one_way_transmittance <= 1,
            "atmosphere.one_way_transmittance", "in (0, 1]", atm.one_way_transmittance);
  } else {
    require(atm.extinction_coeff_per_m >= 0 && std::isfinite(atm.extinction_coeff_per_m),
            "atmosphere.extinction_coeff_per_m", ">= 0", atm.extinction_coeff_per_m);
  }
}

void validate(const ReceiverOptics& optics) {
  require(optics.aperture_radius_m > 0, "optics.aperture_radius_m", "> 0",
          optics.aperture_radius_m);
  require(optics.focal_length_m > 0, "optics.focal_length_m", "> 0", optics.focal_length_m);
  require(optics.detector_radius_m > 0 && std::isfinite(optics.detector_radius_m),
          "optics.detector_radius", "> 0", optics.detector_radius_m);
  require(optics.laser_efficiency > 0 && optics.laser_efficiency <= 1,
          "optics.laser_efficiency", "in (0, 1]", optics.laser_efficiency);
  require(optics.sun_efficiency > 0 && optics.sun_efficiency <= 1, "optics.sun_efficiency",
          "in (0, 1]", optics.sun_efficiency);
}

void validate(const TargetModel& target) {
  require(target.reflectivity >= 0 && target.reflectivity <= 1, "target.reflectivity",
          "in [0, 1]", target.reflectivity);
  if (!target.extends_beyond_spot) {
    throw ConfigError("target.extends_beyond_spot: partial spot overlap is not modelled");
  }
}

void validate(const LaserParams& laser) {
  require(laser.peak_power_w > 0 && std::isfinite(laser.peak_power_w), "laser.peak_power",
          "> 0", laser.peak_power_w);
  require(laser.pulse_fwhm_s > 0, "laser.pulse_fwhm", "> 0", laser.pulse_fwhm_s);
  require(laser.wavelength_m > 0.3e-6 && laser.wavelength_m < 2.0e-6, "laser.wavelength",
          "in (300, 2000) nm", laser.wavelength_m);
  require(laser.repetition_hz >= 0, "laser.repetition", ">= 0", laser.repetition_hz);
}

void validate(const SolarModel& solar) {
  switch (solar.mode) {
    case SolarMode::direct_irradiance:
      require(solar.in_band_irradiance_w_m2 >= 0 && std::isfinite(solar.in_band_irradiance_w_m2),
              "solar.irradiance_w_m2", ">= 0", solar.in_band_irradiance_w_m2);
      break;
    case SolarMode::illuminance_scaled:
      require(solar.illuminance_klux >= 0, "solar.illuminance_klux", ">= 0",
              solar.illuminance_klux);
      require(solar.reference_klux > 0, "solar.reference_klux", "> 0", solar.reference_klux);
      require(solar.reference_irradiance_w_m2 >= 0, "solar.reference_irradiance_w_m2", ">= 0",
              solar.reference_irradiance_w_m2);
      break;
    case SolarMode::spectrum_integral: {
      if (solar.spectrum.size() < 2) {
        throw ConfigError("solar.spectrum: at least 2 rows are required");
      }
      for (std::size_t i = 0; i < solar.spectrum.size(); ++i) {
        const auto& row = solar.spectrum[i];
        if (i > 0 && !(row.wavelength_nm > solar.spectrum[i - 1].wavelength_nm)) {
          throw ConfigError("solar.spectrum: wavelengths must be strictly increasing (row " +
                            std::to_string(i + 1) + ")");
        }
        require(row.irradiance_w_m2_nm >= 0, "solar.spectrum.irradiance_w_m2_nm", ">= 0",
                row.irradiance_w_m2_nm);
        require(row.transmittance >= 0 && row.transmittance <= 1,
                "solar.spectrum.transmittance", "in [0, 1]", row.transmittance);
      }
      break;
    }
  }
}

double one_way_transmittance(const AtmosphereModel& atm, double range_m) {
  if (atm.mode == AtmosphereMode::fixed_transmittance) return atm.one_way_transmittance;
  return std::exp(-atm.extinction_coeff_per_m * range_m);
}

double effective_aperture(const ReceiverOptics& optics, double theta_r) {
  const double full = constants::pi * optics.aperture_radius_m * optics.aperture_radius_m;
  switch (optics.aperture_model) {
    case ApertureModel::constant:
      return full;
    case ApertureModel::cosine:
      return full * std::cos(theta_r);
  }
  return full;
}

double fov_half_angle(const ReceiverOptics& optics) {
  return std::atan(optics.detector_radius_m / optics.focal_length_m);
}

double echo_power(const SceneGeometry& scene, const AtmosphereModel& atm,
                  const ReceiverOptics& optics, const TargetModel& target,
                  const LaserParams& laser) {
  const double tau = one_way_transmittance(atm, scene.range_m);
  const double area = effective_aperture(optics, scene.elevation_angle_rad);
  return tau * tau * optics.laser_efficiency * target.reflectivity * laser.peak_power_w * area *
         std::cos(scene.incidence_angle_rad) / (constants::pi * scene.range_m * scene.range_m);
}

Eigen::ArrayXd echo_power(const Eigen::ArrayXd& ranges_m, const SceneGeometry& scene,
                          const AtmosphereModel& atm, const ReceiverOptics& optics,
                          const TargetModel& target, const LaserParams& laser) {
  const double area = effective_aperture(optics, scene.elevation_angle_rad);
  const double scale = optics.laser_efficiency * target.reflectivity * laser.peak_power_w *
                       area * std::cos(scene.incidence_angle_rad) / constants::pi;
  Eigen::ArrayXd tau(ranges_m.size());
  if (atm.mode == AtmosphereMode::fixed_transmittance) {
    tau.setConstant(atm.one_way_transmittance);
  } else {
    tau = (-atm.extinction_coeff_per_m * ranges_m).exp();
  }
  return scale * tau.square() / ranges_m.square();
}

double sun_equivalent_irradiance(const SolarModel& solar) {
  switch (solar.mode) {
    case SolarMode::direct_irradiance:
      return solar.in_band_irradiance_w_m2;
    case SolarMode::illuminance_scaled:
      return solar.reference_irradiance_w_m2 * (solar.illuminance_klux / solar.reference_klux);
    case SolarMode::spectrum_integral: {
      if (solar.spectrum.size() < 2) {
        throw ConfigError("solar.spectrum: at least 2 rows are required");
      }
      const auto n = static_cast<Eigen::Index>(solar.spectrum.size());
      Eigen::ArrayXd wl(n);
      Eigen::ArrayXd weighted(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = solar.spectrum[static_cast<std::size_t>(i)];
        wl[i] = row.wavelength_nm;
        weighted[i] = row.irradiance_w_m2_nm * row.transmittance;
      }
      return numerics::trapezoid(wl, weighted);
    }
  }
  return 0.0;
}

double background_power(const SceneGeometry& scene, const AtmosphereModel& atm,
                        const ReceiverOptics& optics, const TargetModel& target,
                        const SolarModel& solar) {
  const double fov_ratio = optics.detector_radius_m / optics.focal_length_m;
  return sun_equivalent_irradiance(solar) * optics.sun_efficiency *
         one_way_transmittance(atm, scene.range_m) * target.reflectivity *
         effective_aperture(optics, scene.elevation_angle_rad) * fov_ratio * fov_ratio *
         std::cos(scene.sun_angle_rad);
}

}  // namespace dtof
