#include "dtof/scenario.hpp"

#include "dtof/errors.hpp"

#include "units.hpp"

namespace dtof {

void validate(const DetectorChoice& detector) {
  if (const auto* apd = std::get_if<ApdDetector>(&detector)) {
    validate(apd->params);
    return;
  }
  const auto& sipm = std::get<SipmDetector>(detector);
  validate(sipm.params);
  validate(sipm.monte_carlo, sipm.params);
}

void validate(const ScenarioConfig& c) {
  validate(c.scene);
  validate(c.atmosphere);
  validate(c.optics);
  validate(c.target);
  validate(c.laser);
  validate(c.solar);
  validate(c.tdc);
  validate(c.detector);
  if (c.tdc.bandwidth_hz != c.bandwidth_hz) {
    throw ConfigError("tdc.bandwidth: must equal the effective bandwidth");
  }
}

ApdDetector table1_apd() {
  ApdDetector d;
  auto& p = d.params;
  p.gain = 80.0;
  p.quantum_efficiency = units::percent.from(70.0);
  p.excess_noise_mode = ExcessNoiseMode::power_law;
  p.excess_noise_index = 0.3;
  p.electron_ionization_rate = 0.0;
  p.surface_dark_current_a = units::nano.from(0.1);
  p.bulk_dark_current_a = units::nano.from(0.1);
  p.load_resistance_ohm = 10000.0;
  p.temperature_k = 300.0;
  p.amplifier_noise_a = 0.0;
  return d;
}

SipmDetector table1_sipm() {
  SipmDetector d;
  d.params.n_pixels = 20 * 20;
  d.params.pde = units::percent.from(22.0);
  d.params.dead_time_s = units::nano.from(6.0);
  d.params.dark_count_rate_cps = 2007.0;
  d.snr_mode = SipmSnrMode::analytic;
  return d;
}

ScenarioConfig table1_preset(DetectorKind kind) {
  ScenarioConfig c;
  c.name = kind == DetectorKind::apd ? "table1-apd" : "table1-sipm";

  c.scene.range_m = 100.0;
  c.scene.incidence_angle_rad = 0.0;
  c.scene.elevation_angle_rad = 0.0;
  c.scene.sun_angle_rad = units::degrees.from(60.0);

  c.atmosphere = AtmosphereModel::fixed(units::percent.from(98.0));

  c.optics.aperture_radius_m = 0.025;
  c.optics.focal_length_m = 0.03;
  c.optics.detector_radius_m = units::milli.from(0.1);
  c.optics.laser_efficiency = units::percent.from(72.06);
  c.optics.sun_efficiency = units::percent.from(79.86);
  c.optics.aperture_model = ApertureModel::constant;

  c.target.reflectivity = units::percent.from(10.0);

  c.laser.peak_power_w = 45.0;
  c.laser.wavelength_m = units::nano.from(905.0);
  c.laser.pulse_fwhm_s = units::nano.from(6.0);
  c.laser.repetition_hz = units::kilo.from(50.0);

  c.solar = SolarModel::illuminance(100.0, 100.0, 29.4);

  c.bandwidth_hz = units::mega.from(167.0);
  c.tdc.tnr = 5.0;
  c.tdc.window_s = units::micro.from(4.0);
  c.tdc.bandwidth_hz = c.bandwidth_hz;
  c.tdc.limit_detection_prob = units::percent.from(50.0);

  if (kind == DetectorKind::apd) {
    c.detector = table1_apd();
  } else {
    c.detector = table1_sipm();
  }
  return c;
}

}  // namespace dtof
