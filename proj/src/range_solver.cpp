#include "dtof/range_solver.hpp"

#include "check.hpp"
#include "dtof/constants.hpp"
#include "dtof/numerics.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace dtof {

namespace {

SceneGeometry at_range(SceneGeometry scene, double range_m) {
  scene.range_m = range_m;
  return scene;
}

}  // namespace

LinkEvaluation evaluate_link(const ScenarioConfig& s, const DetectorChoice& detector,
                             double range_m) {
  const SceneGeometry scene = at_range(s.scene, range_m);
  LinkEvaluation out;
  out.range_m = range_m;
  out.p_r = echo_power(scene, s.atmosphere, s.optics, s.target, s.laser);
  out.p_rs = background_power(scene, s.atmosphere, s.optics, s.target, s.solar);

  if (const auto* apd = std::get_if<ApdDetector>(&detector)) {
    out.snr = trigger_snr(apd->params, s.laser.wavelength_m, out.p_r, out.p_rs, s.bandwidth_hz);
    out.noiseless = std::isinf(out.snr);
    return out;
  }

  const auto& sipm = std::get<SipmDetector>(detector);
  try {
    switch (sipm.snr_mode) {
      case SipmSnrMode::analytic: {
        const PhotonCounts counts = photon_counts(sipm.params, out.p_r, out.p_rs,
                                                  s.laser.pulse_fwhm_s, s.laser.wavelength_m);
        const SipmSnr r = trigger_snr_analytic(sipm.params, counts);
        out.snr = r.value;
        out.saturated = r.saturated;
        out.noiseless = r.noiseless;
        break;
      }
      case SipmSnrMode::approx: {
        const SipmSnr r = trigger_snr_approx(sipm.params, out.p_r, out.p_rs,
                                             s.laser.pulse_fwhm_s, s.laser.wavelength_m);
        out.snr = r.value;
        out.noiseless = r.noiseless;
        break;
      }
      case SipmSnrMode::monte_carlo: {
        const SipmMcResult r =
            monte_carlo_snr(sipm.params, out.p_r, out.p_rs, s.laser.pulse_fwhm_s,
                            s.laser.wavelength_m, s.bandwidth_hz, sipm.monte_carlo);
        out.snr = r.snr;
        out.snr_std_error = r.std_error;
        out.noiseless = std::isinf(r.snr);
        break;
      }
    }
    if (sipm.snr_mode != SipmSnrMode::analytic) {
      const PhotonCounts counts = photon_counts(sipm.params, out.p_r, out.p_rs,
                                                s.laser.pulse_fwhm_s, s.laser.wavelength_m);
      const double free_pixels = static_cast<double>(sipm.params.n_pixels) -
                                 background_occupancy(sipm.params, counts) -
                                 dark_occupancy(sipm.params).mean;
      out.saturated = -std::expm1(counts.n_s_photon * log_survival_per_photon(sipm.params)) >=
                          kSaturationFraction &&
                      free_pixels > 0;
    }
  } catch (const SaturationError& e) {
    throw SaturationError(std::string(e.what()) + " at range " +
                          detail::format_number(range_m) + " m");
  }
  return out;
}

RangeResult max_range(const ScenarioConfig& scenario, const DetectorChoice& detector,
                      const TdcPolicy& policy, const RangeSolverOptions& opt) {
  const double tnr = policy.tnr;
  auto excess = [&](double r) { return snr_at_range(scenario, detector, r) - tnr; };

  if (!(excess(opt.r_lo_m) > 0.0)) {
    throw NoDetectionError("SNR at the minimum range " + detail::format_number(opt.r_lo_m) +
                           " m is below the threshold " + detail::format_number(tnr));
  }
  double lo = opt.r_lo_m;
  double hi = std::max(opt.r_start_m, opt.r_lo_m * 2.0);
  while (excess(hi) > 0.0) {
    if (hi >= opt.r_cap_m) {
      throw UnboundedRangeError("SNR still above the threshold at the " +
                                detail::format_number(opt.r_cap_m) + " m search cap");
    }
    lo = hi;
    hi = std::min(2.0 * hi, opt.r_cap_m);
  }

  const double root =
      numerics::bisect_decreasing(excess, lo, hi, opt.width_tol_m, opt.snr_rel_tol * tnr);
  const LinkEvaluation at_root = evaluate_link(scenario, detector, root);

  RangeResult out;
  out.r_max_m = root;
  out.snr_at_rmax = at_root.snr;
  out.min_detectable_power_w = at_root.p_r;
  out.background_power_w = at_root.p_rs;
  out.method = RangeMethod::pipeline;
  if (const auto* sipm = std::get_if<SipmDetector>(&detector)) {
    out.saturation_range_m = sipm_saturation_range(scenario, *sipm, opt.r_lo_m);
  }
  return out;
}

double closed_form_max_range(const ScenarioConfig& s, const DetectorChoice& detector) {
  if (s.atmosphere.mode != AtmosphereMode::fixed_transmittance) {
    throw ConfigError("closed-form range needs a fixed-transmittance atmosphere");
  }
  const double tau = s.atmosphere.one_way_transmittance;
  const double hv = s.laser.photon_energy_j();
  const double area = effective_aperture(s.optics, s.scene.elevation_angle_rad);
  const double e_sun = sun_equivalent_irradiance(s.solar);
  const double cos_inc = std::cos(s.scene.incidence_angle_rad);
  const double cos_sun = std::cos(s.scene.sun_angle_rad);
  const double rho = s.target.reflectivity;
  const double tnr = s.tdc.tnr;
  const double f = s.optics.focal_length_m;
  const double r_pd = s.optics.detector_radius_m;
  const double optics_term = std::pow(tau, 1.5) * s.optics.laser_efficiency * cos_inc;

  if (const auto* apd = std::get_if<ApdDetector>(&detector)) {
    const double fm = excess_noise_factor(apd->params);
    const double geometry =
        optics_term / (constants::pi * std::sqrt(2.0 * hv * s.optics.sun_efficiency * cos_sun));
    const double efficiency =
        apd->params.quantum_efficiency * rho * area / (e_sun * fm * s.bandwidth_hz);
    return std::sqrt(geometry) * std::pow(efficiency, 0.25) *
           std::sqrt(s.laser.peak_power_w * f / (tnr * r_pd));
  }

  const auto& sipm = std::get<SipmDetector>(detector);
  const double geometry =
      optics_term / (2.0 * constants::pi *
                     std::sqrt(hv * s.optics.sun_efficiency * sipm.params.dead_time_s * cos_sun));
  const double efficiency = sipm.params.pde * rho * area / e_sun;
  return std::sqrt(geometry) * std::pow(efficiency, 0.25) *
         std::sqrt(s.laser.peak_power_w * s.laser.pulse_fwhm_s * f / (tnr * r_pd));
}

std::optional<double> sipm_saturation_range(const ScenarioConfig& s, const SipmDetector& sipm,
                                            double r_lo_m) {
  // Echo photons at which 1 - exp(n k) reaches the saturation fraction.
  const double k = log_survival_per_photon(sipm.params);
  const double n_sat = std::log1p(-kSaturationFraction) / k;
  const double p_sat = n_sat * 2.0 * s.laser.photon_energy_j() / s.laser.pulse_fwhm_s;
  auto p_r = [&](double r) {
    return echo_power(at_range(s.scene, r), s.atmosphere, s.optics, s.target, s.laser);
  };
  if (!(p_r(r_lo_m) > p_sat)) return std::nullopt;
  double hi = std::max(2.0 * r_lo_m, 100.0);
  while (p_r(hi) > p_sat) {
    hi *= 2.0;
    if (hi > 1e7) return std::nullopt;
  }
  auto g = [&](double r) { return std::log(p_r(r) / p_sat); };
  return numerics::bisect_decreasing(g, r_lo_m, hi, 1e-6, 1e-12);
}

namespace {

enum class Applies { any, apd, sipm };

struct ParameterEntry {
  const char* name;
  Applies applies;
  std::function<double*(ScenarioConfig&)> access;
};

ApdParams* apd_of(ScenarioConfig& s) {
  auto* d = std::get_if<ApdDetector>(&s.detector);
  return d ? &d->params : nullptr;
}

SipmParams* sipm_of(ScenarioConfig& s) {
  auto* d = std::get_if<SipmDetector>(&s.detector);
  return d ? &d->params : nullptr;
}

const std::vector<ParameterEntry>& registry() {
  static const std::vector<ParameterEntry> entries = {
      {"peak_power", Applies::any, [](ScenarioConfig& s) { return &s.laser.peak_power_w; }},
      {"repetition_rate", Applies::any, [](ScenarioConfig& s) { return &s.laser.repetition_hz; }},
      {"pulse_width", Applies::any, [](ScenarioConfig& s) { return &s.laser.pulse_fwhm_s; }},
      {"wavelength", Applies::any, [](ScenarioConfig& s) { return &s.laser.wavelength_m; }},
      {"reflectivity", Applies::any, [](ScenarioConfig& s) { return &s.target.reflectivity; }},
      {"transmittance", Applies::any,
       [](ScenarioConfig& s) -> double* {
         return s.atmosphere.mode == AtmosphereMode::fixed_transmittance
                    ? &s.atmosphere.one_way_transmittance
                    : nullptr;
       }},
      {"extinction_coeff", Applies::any,
       [](ScenarioConfig& s) -> double* {
         return s.atmosphere.mode == AtmosphereMode::extinction
                    ? &s.atmosphere.extinction_coeff_per_m
                    : nullptr;
       }},
      {"laser_efficiency", Applies::any,
       [](ScenarioConfig& s) { return &s.optics.laser_efficiency; }},
      {"aperture_radius", Applies::any,
       [](ScenarioConfig& s) { return &s.optics.aperture_radius_m; }},
      {"sun_irradiance", Applies::any,
       [](ScenarioConfig& s) -> double* {
         switch (s.solar.mode) {
           case SolarMode::direct_irradiance:
             return &s.solar.in_band_irradiance_w_m2;
           case SolarMode::illuminance_scaled:
             return &s.solar.illuminance_klux;  // E_sun is linear in it
           case SolarMode::spectrum_integral:
             return nullptr;
         }
         return nullptr;
       }},
      {"sun_angle", Applies::any, [](ScenarioConfig& s) { return &s.scene.sun_angle_rad; }},
      {"incidence_angle", Applies::any,
       [](ScenarioConfig& s) { return &s.scene.incidence_angle_rad; }},
      {"elevation_angle", Applies::any,
       [](ScenarioConfig& s) { return &s.scene.elevation_angle_rad; }},
      {"sun_efficiency", Applies::any, [](ScenarioConfig& s) { return &s.optics.sun_efficiency; }},
      {"focal_length", Applies::any, [](ScenarioConfig& s) { return &s.optics.focal_length_m; }},
      {"detector_radius", Applies::any,
       [](ScenarioConfig& s) { return &s.optics.detector_radius_m; }},
      {"bandwidth", Applies::any, [](ScenarioConfig& s) { return &s.bandwidth_hz; }},
      {"tnr", Applies::any, [](ScenarioConfig& s) { return &s.tdc.tnr; }},
      {"gain", Applies::apd, [](ScenarioConfig& s) { return &apd_of(s)->gain; }},
      {"quantum_efficiency", Applies::apd,
       [](ScenarioConfig& s) { return &apd_of(s)->quantum_efficiency; }},
      {"excess_noise_index", Applies::apd,
       [](ScenarioConfig& s) { return &apd_of(s)->excess_noise_index; }},
      {"electron_ionization_rate", Applies::apd,
       [](ScenarioConfig& s) { return &apd_of(s)->electron_ionization_rate; }},
      {"surface_dark_current", Applies::apd,
       [](ScenarioConfig& s) { return &apd_of(s)->surface_dark_current_a; }},
      {"bulk_dark_current", Applies::apd,
       [](ScenarioConfig& s) { return &apd_of(s)->bulk_dark_current_a; }},
      {"load_resistance", Applies::apd,
       [](ScenarioConfig& s) { return &apd_of(s)->load_resistance_ohm; }},
      {"temperature", Applies::apd, [](ScenarioConfig& s) { return &apd_of(s)->temperature_k; }},
      {"amplifier_noise", Applies::apd,
       [](ScenarioConfig& s) { return &apd_of(s)->amplifier_noise_a; }},
      {"pde", Applies::sipm, [](ScenarioConfig& s) { return &sipm_of(s)->pde; }},
      {"dead_time", Applies::sipm, [](ScenarioConfig& s) { return &sipm_of(s)->dead_time_s; }},
      {"dark_count_rate", Applies::sipm,
       [](ScenarioConfig& s) { return &sipm_of(s)->dark_count_rate_cps; }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> sensitivity_parameters() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.emplace_back(e.name);
  return names;
}

double& parameter_ref(ScenarioConfig& s, std::string_view parameter) {
  for (const auto& e : registry()) {
    if (parameter != e.name) continue;
    const DetectorKind kind = kind_of(s.detector);
    if ((e.applies == Applies::apd && kind != DetectorKind::apd) ||
        (e.applies == Applies::sipm && kind != DetectorKind::sipm)) {
      throw ConfigError("parameter '" + std::string(parameter) + "' does not apply to the " +
                        label_of(kind) + " detector");
    }
    double* p = e.access(s);
    if (p == nullptr) {
      throw ConfigError("parameter '" + std::string(parameter) +
                        "' is not defined in this scenario's mode");
    }
    return *p;
  }
  throw ConfigError("unknown parameter '" + std::string(parameter) + "'");
}

double sensitivity(const ScenarioConfig& scenario, const DetectorChoice& detector,
                   const TdcPolicy& policy, std::string_view parameter, double rel_step) {
  if (!(rel_step > 0.0 && rel_step <= 0.1)) {
    throw ConfigError("rel_step: must be in (0, 0.1] (got " + detail::format_number(rel_step) +
                      ")");
  }
  ScenarioConfig base = scenario;
  base.detector = detector;
  base.tdc = policy;
  base.tdc.bandwidth_hz = base.bandwidth_hz;
  const double value = parameter_ref(base, parameter);
  if (value == 0.0) {
    throw ConfigError("parameter '" + std::string(parameter) +
                      "' is zero; the log-elasticity is undefined");
  }

  RangeSolverOptions tight;
  tight.width_tol_m = 1e-9;
  tight.snr_rel_tol = 1e-12;
  auto log_range = [&](double factor) {
    ScenarioConfig s = base;
    parameter_ref(s, parameter) = value * factor;
    s.tdc.bandwidth_hz = s.bandwidth_hz;
    return std::log(max_range(s, s.detector, s.tdc, tight).r_max_m);
  };
  const double up = 1.0 + rel_step;
  const double down = 1.0 - rel_step;
  return (log_range(up) - log_range(down)) / (std::log(up) - std::log(down));
}

}  // namespace dtof
