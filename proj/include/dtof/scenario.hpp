#pragma once

#include "dtof/apd_detector.hpp"
#include "dtof/scene_link.hpp"
#include "dtof/sipm_detector.hpp"
#include "dtof/sipm_monte_carlo.hpp"
#include "dtof/tdc_detection.hpp"

#include <string>
#include <variant>

namespace dtof {

struct ApdDetector {
  ApdParams params;

  bool operator==(const ApdDetector&) const = default;
};

enum class SipmSnrMode { analytic, approx, monte_carlo };

struct SipmDetector {
  SipmParams params;
  SipmSnrMode snr_mode = SipmSnrMode::analytic;
  SipmMcConfig monte_carlo;

  bool operator==(const SipmDetector&) const = default;
};

using DetectorChoice = std::variant<ApdDetector, SipmDetector>;

enum class DetectorKind { apd, sipm };

inline DetectorKind kind_of(const DetectorChoice& d) {
  return std::holds_alternative<ApdDetector>(d) ? DetectorKind::apd : DetectorKind::sipm;
}

inline const char* label_of(DetectorKind kind) {
  return kind == DetectorKind::apd ? "apd" : "sipm";
}

/// Complete scene, optics and detector description. All fields in SI units.
struct ScenarioConfig {
  std::string name;
  SceneGeometry scene;
  AtmosphereModel atmosphere;
  ReceiverOptics optics;
  TargetModel target;
  LaserParams laser;
  SolarModel solar;
  TdcPolicy tdc;
  DetectorChoice detector;
  double bandwidth_hz = 167e6;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Checks every sub-type invariant; throws ConfigError on the first violation.
void validate(const ScenarioConfig& config);

void validate(const DetectorChoice& detector);

/// Baseline parameter set with either detector block.
ScenarioConfig table1_preset(DetectorKind kind);

/// Detector blocks of the baseline set.
ApdDetector table1_apd();
SipmDetector table1_sipm();

}  // namespace dtof
