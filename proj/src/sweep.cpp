#include "dtof/sweep.hpp"

#include "dtof/errors.hpp"
#include "dtof/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace dtof {

const char* sweep_kind_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::distance: return "distance";
    case SweepKind::elevation: return "elevation";
    case SweepKind::illuminance: return "illuminance";
    case SweepKind::photon_response: return "photon_response";
  }
  return "";
}

Eigen::ArrayXd make_grid(const GridSpec& spec) {
  Eigen::ArrayXd g;
  if (!spec.values.empty()) {
    g = Eigen::Map<const Eigen::ArrayXd>(spec.values.data(),
                                         static_cast<Eigen::Index>(spec.values.size()));
  } else {
    if (spec.n < 1) throw ConfigError("grid: needs at least one point");
    if (!std::isfinite(spec.min) || !std::isfinite(spec.max)) {
      throw ConfigError("grid: bounds must be finite");
    }
    if (spec.n == 1) {
      g = Eigen::ArrayXd::Constant(1, spec.min);
    } else if (spec.spacing == GridSpacing::log) {
      if (!(spec.min > 0.0 && spec.max > 0.0)) {
        throw ConfigError("grid: log spacing needs positive bounds");
      }
      g = numerics::log_grid(spec.min, spec.max, spec.n);
      g(0) = spec.min;
      g(spec.n - 1) = spec.max;
    } else {
      g = numerics::linear_grid(spec.min, spec.max, spec.n);
    }
  }
  if (g.size() == 0) throw ConfigError("grid: must not be empty");
  if (!g.isFinite().all()) throw ConfigError("grid: values must be finite");
  if (g.size() > 1) {
    const Eigen::ArrayXd step = g.tail(g.size() - 1) - g.head(g.size() - 1);
    if (!((step > 0.0).all() || (step < 0.0).all())) {
      throw ConfigError("grid: values must be strictly monotone");
    }
  }
  return g;
}

std::vector<PhotonFamily> default_photon_families() {
  std::vector<PhotonFamily> out;
  auto sipm = [](std::int64_t n, double pde) {
    SipmParams p;
    p.n_pixels = n;
    p.pde = pde;
    p.dark_count_rate_cps = 0.0;
    return p;
  };
  char label[64];
  for (double pde : {0.1, 0.22, 0.5, 1.0}) {
    std::snprintf(label, sizeof label, "pde=%g;n_pixels=100;n_b_photon=0", pde);
    out.push_back({label, sipm(100, pde), 0.0});
  }
  for (std::int64_t n : {100, 400, 1600, 10000}) {
    std::snprintf(label, sizeof label, "pde=0.22;n_pixels=%lld;n_b_photon=0",
                  static_cast<long long>(n));
    out.push_back({label, sipm(n, 0.22), 0.0});
  }
  for (double bg : {100.0, 300.0, 1000.0}) {
    std::snprintf(label, sizeof label, "pde=0.22;n_pixels=100;n_b_photon=%g", bg);
    out.push_back({label, sipm(100, 0.22), bg});
  }
  return out;
}

SweepSpec default_sweep(SweepKind kind, std::vector<DetectorChoice> detectors) {
  SweepSpec s;
  s.kind = kind;
  s.detectors = std::move(detectors);
  switch (kind) {
    case SweepKind::distance:
      s.grid = GridSpec::range(10.0, 1000.0, 61, GridSpacing::log);
      break;
    case SweepKind::elevation:
      s.grid = GridSpec::range(-60.0, 60.0, 25, GridSpacing::linear);
      s.aperture_model = ApertureModel::cosine;
      break;
    case SweepKind::illuminance:
      s.grid = GridSpec::range(0.01, 100.0, 50, GridSpacing::log);
      break;
    case SweepKind::photon_response:
      s.grid = GridSpec::range(1.0, 1e5, 101, GridSpacing::log);
      s.detectors.clear();
      s.families = default_photon_families();
      break;
  }
  return s;
}

bool SweepResult::all_failed() const {
  if (kind == SweepKind::photon_response || values.size() == 0) return false;
  return !values.array().isFinite().any() &&
         std::none_of(status.begin(), status.end(), [](const std::string& s) {
           return s == "ok";
         });
}

namespace {

const char* error_code(const SolverError& e) {
  if (dynamic_cast<const NoDetectionError*>(&e)) return "no_detection";
  if (dynamic_cast<const UnboundedRangeError*>(&e)) return "unbounded";
  if (dynamic_cast<const SaturationError*>(&e)) return "background_saturated";
  return "solver_error";
}

ScenarioConfig at_grid_point(const ScenarioConfig& base, const SweepSpec& spec, double x) {
  ScenarioConfig s = base;
  if (spec.aperture_model) s.optics.aperture_model = *spec.aperture_model;
  switch (spec.kind) {
    case SweepKind::elevation:
      s.scene.elevation_angle_rad = x * std::numbers::pi / 180.0;
      break;
    case SweepKind::illuminance:
      if (s.solar.mode == SolarMode::illuminance_scaled) {
        s.solar.illuminance_klux = x;
      } else {
        s.solar = SolarModel::illuminance(x);
      }
      break;
    default:
      break;
  }
  return s;
}

void validate_spec(const SweepSpec& spec) {
  if (spec.kind == SweepKind::photon_response) {
    if (spec.families.empty()) throw ConfigError("sweep: photon response needs curve families");
    for (const auto& f : spec.families) {
      validate(f.params);
      if (!(f.background_photons >= 0.0)) {
        throw ConfigError("sweep: background photons must be >= 0");
      }
    }
    return;
  }
  if (spec.detectors.empty()) throw ConfigError("sweep: needs at least one detector");
  if (!spec.labels.empty() && spec.labels.size() != spec.detectors.size()) {
    throw ConfigError("sweep: one label per detector required");
  }
  for (const auto& d : spec.detectors) validate(d);
  if (spec.kind == SweepKind::illuminance) {
    const Eigen::ArrayXd g = make_grid(spec.grid);
    if (!(g > 0.0).all()) throw ConfigError("sweep: illuminance must be positive");
  }
}

/// Runs body(i) for i in [0, n) on up to `workers` threads, strided.
template <typename F>
void parallel_for(Eigen::Index n, unsigned workers, F&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (Eigen::Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Eigen::Index i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

void photon_response(const SweepSpec& spec, SweepResult& out) {
  for (const auto& f : spec.families) {
    PhotonCurve c;
    c.label = f.label;
    c.n_fired.resize(out.grid.size());
    for (Eigen::Index i = 0; i < out.grid.size(); ++i) {
      const PhotonCounts counts{f.background_photons, out.grid(i)};
      const double n_b = background_occupancy(f.params, counts);
      c.n_fired(i) = signal_fired(f.params, counts, n_b, 0.0);
    }
    out.curves.push_back(std::move(c));
  }
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& config, const SweepSpec& spec) {
  validate_spec(spec);
  SweepResult out;
  out.kind = spec.kind;
  out.grid = make_grid(spec.grid);
  out.threshold = config.tdc.tnr;
  if (spec.kind == SweepKind::photon_response) {
    photon_response(spec, out);
    return out;
  }

  const auto n_det = static_cast<Eigen::Index>(spec.detectors.size());
  for (Eigen::Index d = 0; d < n_det; ++d) {
    out.labels.push_back(spec.labels.empty() ? label_of(kind_of(spec.detectors[d]))
                                             : spec.labels[d]);
  }

  const Eigen::Index n = out.grid.size();
  const unsigned budget = std::max(1u, spec.threads);
  const unsigned workers = std::min<unsigned>(budget, static_cast<unsigned>(n));
  std::vector<DetectorChoice> detectors = spec.detectors;
  for (auto& d : detectors) {
    if (auto* sipm = std::get_if<SipmDetector>(&d)) {
      sipm->monte_carlo.threads = std::max(1u, budget / workers);
    }
  }

  out.values = Eigen::MatrixXd::Constant(n, n_det, std::numeric_limits<double>::quiet_NaN());
  out.status.assign(static_cast<std::size_t>(n), "");

  parallel_for(n, workers, [&](Eigen::Index i) {
    const ScenarioConfig scenario = at_grid_point(config, spec, out.grid(i));
    std::string status;
    auto note = [&](Eigen::Index d, const char* code) {
      if (!status.empty()) status += ';';
      status += out.labels[d] + ':' + code;
    };
    for (Eigen::Index d = 0; d < n_det; ++d) {
      try {
        if (spec.kind == SweepKind::distance) {
          const LinkEvaluation e = evaluate_link(scenario, detectors[d], out.grid(i));
          out.values(i, d) = e.snr;
          if (e.saturated) note(d, "saturated");
        } else {
          out.values(i, d) = max_range(scenario, detectors[d], scenario.tdc, spec.solver).r_max_m;
        }
      } catch (const SolverError& e) {
        note(d, error_code(e));
      }
    }
    out.status[static_cast<std::size_t>(i)] = status.empty() ? "ok" : status;
  });

  out.saturation_range_m.resize(static_cast<std::size_t>(n_det));
  for (Eigen::Index d = 0; d < n_det; ++d) {
    if (const auto* sipm = std::get_if<SipmDetector>(&detectors[d])) {
      ScenarioConfig s = config;
      if (spec.aperture_model) s.optics.aperture_model = *spec.aperture_model;
      out.saturation_range_m[d] = sipm_saturation_range(s, *sipm, spec.solver.r_lo_m);
    }
  }
  return out;
}

}  // namespace dtof
