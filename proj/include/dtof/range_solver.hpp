#pragma once

#include "dtof/scenario.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dtof {

/// Link budget and detector response at one range.
struct LinkEvaluation {
  double range_m = 0.0;
  double p_r = 0.0;
  double p_rs = 0.0;
  double snr = 0.0;
  double snr_std_error = 0.0;  // Monte Carlo mode only
  bool saturated = false;      // SiPM echo response compressed
  bool noiseless = false;
};

/// Composes echo and background power with the detector's trigger SNR.
/// SiPM saturation errors are rethrown with the range in the message.
LinkEvaluation evaluate_link(const ScenarioConfig& scenario, const DetectorChoice& detector,
                             double range_m);

inline double snr_at_range(const ScenarioConfig& scenario, const DetectorChoice& detector,
                           double range_m) {
  return evaluate_link(scenario, detector, range_m).snr;
}

enum class RangeMethod { pipeline, closed_form };

struct RangeResult {
  double r_max_m = 0.0;
  double snr_at_rmax = 0.0;
  double min_detectable_power_w = 0.0;  // echo power at r_max
  double background_power_w = 0.0;
  RangeMethod method = RangeMethod::pipeline;
  /// SiPM only: range below which the echo saturates the free pixels.
  std::optional<double> saturation_range_m;
};

struct RangeSolverOptions {
  double r_lo_m = 1.0;
  double r_start_m = 100.0;  // first upper bracket, doubled until SNR < TNR
  double r_cap_m = 1e5;
  double width_tol_m = 1e-3;
  double snr_rel_tol = 1e-6;
};

/// Background -> noise -> weakest detectable echo -> range: the range where the
/// trigger SNR falls to the threshold-to-noise ratio, found by bisection.
RangeResult max_range(const ScenarioConfig& scenario, const DetectorChoice& detector,
                      const TdcPolicy& policy, const RangeSolverOptions& options = {});

inline RangeResult max_range(const ScenarioConfig& scenario,
                             const RangeSolverOptions& options = {}) {
  return max_range(scenario, scenario.detector, scenario.tdc, options);
}

/// Photon-limited closed form. APD: optical shot noise only; SiPM: the
/// sqrt-background approximation. Requires a fixed-transmittance atmosphere.
double closed_form_max_range(const ScenarioConfig& scenario, const DetectorChoice& detector);

/// Range below which a SiPM echo fires kSaturationFraction of the free pixels,
/// or nullopt for APDs and when it lies below r_lo.
std::optional<double> sipm_saturation_range(const ScenarioConfig& scenario,
                                            const SipmDetector& detector,
                                            double r_lo_m = 1.0);

/// Names accepted by `sensitivity`.
std::vector<std::string> sensitivity_parameters();

/// Elasticity d ln R_max / d ln p by central differences in log space.
double sensitivity(const ScenarioConfig& scenario, const DetectorChoice& detector,
                   const TdcPolicy& policy, std::string_view parameter,
                   double rel_step = 1e-3);

/// Mutable access to a named parameter; throws ConfigError when the name is
/// unknown or does not apply to the scenario (e.g. `gain` with a SiPM).
double& parameter_ref(ScenarioConfig& scenario, std::string_view parameter);

}  // namespace dtof
