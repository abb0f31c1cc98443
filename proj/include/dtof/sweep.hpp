#pragma once

#include "dtof/range_solver.hpp"
#include "dtof/scenario.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace dtof {

enum class SweepKind { distance, elevation, illuminance, photon_response };

const char* sweep_kind_name(SweepKind kind);

enum class GridSpacing { linear, log };

/// Either an explicit list or `n` points from `min` to `max`. Grids must be
/// non-empty and strictly monotone.
struct GridSpec {
  std::vector<double> values;
  double min = 0.0;
  double max = 0.0;
  int n = 0;
  GridSpacing spacing = GridSpacing::linear;

  static GridSpec list(std::vector<double> v) {
    GridSpec g;
    g.values = std::move(v);
    return g;
  }
  static GridSpec range(double lo, double hi, int n, GridSpacing spacing) {
    GridSpec g;
    g.min = lo;
    g.max = hi;
    g.n = n;
    g.spacing = spacing;
    return g;
  }
};

Eigen::ArrayXd make_grid(const GridSpec& spec);

/// One photon response curve: a SiPM with an optional steady background.
struct PhotonFamily {
  std::string label;
  SipmParams params;
  double background_photons = 0.0;  // photons per dead time
};

/// Curve families of the SiPM response plots: PDE at 100 pixels, pixel count
/// at 22 %, background photons at 22 % and 100 pixels.
std::vector<PhotonFamily> default_photon_families();

struct SweepSpec {
  SweepKind kind = SweepKind::distance;
  GridSpec grid;
  std::vector<DetectorChoice> detectors;
  std::vector<std::string> labels;  // column labels; empty -> "apd"/"sipm"
  std::optional<ApertureModel> aperture_model;
  std::vector<PhotonFamily> families;  // photon_response only
  RangeSolverOptions solver;
  unsigned threads = 1;  // worker budget shared with Monte Carlo trials
};

/// Default spec for each kind: distance 10-1000 m (log), elevation -60..60 deg
/// with the cosine aperture, illuminance 0.01-100 klux (log), photon count
/// 1-1e5 (log).
SweepSpec default_sweep(SweepKind kind, std::vector<DetectorChoice> detectors);

struct PhotonCurve {
  std::string label;
  Eigen::ArrayXd n_fired;
};

struct SweepResult {
  SweepKind kind = SweepKind::distance;
  Eigen::ArrayXd grid;
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  // grid x detector; NaN where the point failed
  std::vector<std::string> status;
  std::vector<PhotonCurve> curves;
  double threshold = 0.0;  // TNR reference (distance sweeps)
  std::vector<std::optional<double>> saturation_range_m;  // per detector

  /// True when every detector failed at every grid point.
  bool all_failed() const;
};

/// Evaluates the spec over its grid. Grid points run concurrently; rows keep
/// grid order and per-point solver errors go to the row status.
SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& spec);

}  // namespace dtof
