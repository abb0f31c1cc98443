// dtof: range, SNR and sweep calculations for APD and SiPM time-of-flight lidars.

#include "dtof/emit.hpp"
#include "dtof/errors.hpp"
#include "dtof/range_solver.hpp"
#include "dtof/scenario_io.hpp"
#include "dtof/sweep.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace dtof;

enum ExitCode { kOk = 0, kValidation = 1, kSolver = 2, kIo = 3 };

struct GlobalOptions {
  std::string config;
  std::string out = "-";
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::string detector;  // empty: per-command default
  std::string sipm_mode;
  std::optional<std::int64_t> trials;
  unsigned threads = 1;
};

struct GridOptions {
  std::optional<double> min;
  std::optional<double> max;
  std::optional<int> points;
  std::string spacing;
};

ScenarioConfig base_scenario(const GlobalOptions& g) {
  if (g.config.empty()) return table1_preset(DetectorKind::apd);
  return load_scenario(g.config);
}

DetectorChoice configure(DetectorChoice d, const GlobalOptions& g) {
  if (auto* sipm = std::get_if<SipmDetector>(&d)) {
    static const std::map<std::string, SipmSnrMode> modes = {
        {"analytic", SipmSnrMode::analytic},
        {"approx", SipmSnrMode::approx},
        {"monte_carlo", SipmSnrMode::monte_carlo}};
    if (!g.sipm_mode.empty()) sipm->snr_mode = modes.at(g.sipm_mode);
    if (g.seed) sipm->monte_carlo.seed = *g.seed;
    if (g.trials) sipm->monte_carlo.n_trials = *g.trials;
    sipm->monte_carlo.threads = g.threads;
  }
  return d;
}

/// The scenario's own block for its kind, the baseline block otherwise.
DetectorChoice detector_of_kind(const ScenarioConfig& s, DetectorKind kind) {
  if (kind_of(s.detector) == kind) return s.detector;
  if (kind == DetectorKind::apd) return table1_apd();
  return table1_sipm();
}

DetectorKind parse_kind(const std::string& name) {
  return name == "apd" ? DetectorKind::apd : DetectorKind::sipm;
}

/// --detector picks one; otherwise both (comparison) or the scenario's own.
std::vector<DetectorChoice> detectors(const ScenarioConfig& s, const GlobalOptions& g,
                                      bool both_by_default) {
  std::vector<DetectorChoice> out;
  if (!g.detector.empty()) {
    out.push_back(configure(detector_of_kind(s, parse_kind(g.detector)), g));
  } else if (both_by_default) {
    out.push_back(configure(detector_of_kind(s, DetectorKind::apd), g));
    out.push_back(configure(detector_of_kind(s, DetectorKind::sipm), g));
  } else {
    out.push_back(configure(s.detector, g));
  }
  return out;
}

void apply_grid(GridSpec& grid, const GridOptions& o) {
  if (o.min) grid.min = *o.min;
  if (o.max) grid.max = *o.max;
  if (o.points) grid.n = *o.points;
  if (o.spacing == "linear") grid.spacing = GridSpacing::linear;
  if (o.spacing == "log") grid.spacing = GridSpacing::log;
}

void add_grid_options(CLI::App* cmd, GridOptions& o) {
  cmd->add_option("--min", o.min, "First grid value");
  cmd->add_option("--max", o.max, "Last grid value");
  cmd->add_option("--points", o.points, "Number of grid points")->check(CLI::PositiveNumber);
  cmd->add_option("--spacing", o.spacing, "Grid spacing")
      ->check(CLI::IsMember({"linear", "log"}));
}

void emit(const GlobalOptions& g, const SweepResult& r) {
  write_text(g.out, g.format == "svg" ? to_svg(r) : to_csv(r));
}

void emit_table(const GlobalOptions& g, const Table& t, const char* command) {
  if (g.format == "svg") {
    throw ConfigError(std::string(command) + ": svg output is not available; use csv");
  }
  write_text(g.out, to_csv(t));
}

int run_sweep_command(const GlobalOptions& g, SweepKind kind, const GridOptions& grid) {
  const ScenarioConfig s = base_scenario(g);
  SweepSpec spec = default_sweep(kind, detectors(s, g, true));
  spec.threads = g.threads;
  apply_grid(spec.grid, grid);
  const SweepResult r = run_sweep(s, spec);
  emit(g, r);
  if (r.all_failed()) {
    std::cerr << "dtof: solver failed at every grid point\n";
    return kSolver;
  }
  return kOk;
}

int run_range(const GlobalOptions& g, const std::string& method) {
  const ScenarioConfig s = base_scenario(g);
  Table t;
  t.header = {"detector",          "method",         "r_max_m", "snr_at_rmax",
              "min_detectable_power_w", "background_power_w", "saturation_range_m",
              "status"};
  bool any_ok = false;
  for (const DetectorChoice& d : detectors(s, g, false)) {
    const std::string label = label_of(kind_of(d));
    std::vector<std::string> row{label, method};
    try {
      if (method == "closed_form") {
        const double r = closed_form_max_range(s, d);
        row.insert(row.end(), {format_value(r), "", "", "", "", "ok"});
      } else {
        const RangeResult r = max_range(s, d, s.tdc);
        row.insert(row.end(),
                   {format_value(r.r_max_m), format_value(r.snr_at_rmax),
                    format_value(r.min_detectable_power_w), format_value(r.background_power_w),
                    r.saturation_range_m ? format_value(*r.saturation_range_m) : "", "ok"});
      }
      any_ok = true;
    } catch (const SolverError& e) {
      std::cerr << "dtof: " << label << ": " << e.what() << '\n';
      row.insert(row.end(), {"nan", "", "", "", "", "solver_error"});
    }
    t.rows.push_back(std::move(row));
  }
  emit_table(g, t, "range");
  return any_ok ? kOk : kSolver;
}

int run_optimize_gain(const GlobalOptions& g, GainBounds bounds, int curve_points) {
  const ScenarioConfig s = base_scenario(g);
  const DetectorChoice d = detector_of_kind(s, DetectorKind::apd);
  if (!g.detector.empty() && g.detector != "apd") {
    throw ConfigError("optimize-gain: applies to the apd detector only");
  }
  const ApdParams& p = std::get<ApdDetector>(d).params;
  const LinkEvaluation link = evaluate_link(s, d, s.scene.range_m);
  const double lambda = s.laser.wavelength_m;
  const GainOptimum opt = optimize_gain(p, lambda, link.p_r, link.p_rs, s.bandwidth_hz, bounds);

  if (curve_points > 0) {
    const Eigen::ArrayXd gains = make_grid(
        GridSpec::range(bounds.lo, bounds.hi, curve_points, GridSpacing::log));
    ApdParams q = p;
    Chart chart;
    chart.title = "APD trigger SNR vs gain";
    chart.x_label = "gain";
    chart.y_label = "trigger SNR";
    chart.log_x = true;
    ChartSeries series{"snr", {}, {}};
    Table t;
    t.header = {"gain", "snr"};
    for (double m : gains) {
      q.gain = m;
      const double snr = trigger_snr(q, lambda, link.p_r, link.p_rs, s.bandwidth_hz);
      series.x.push_back(m);
      series.y.push_back(snr);
      t.rows.push_back({format_value(m), format_value(snr)});
    }
    chart.series.push_back(std::move(series));
    write_text(g.out, g.format == "svg" ? to_svg(chart) : to_csv(t));
    return kOk;
  }

  Table t;
  t.header = {"range_m", "gain", "snr", "at_bound", "snr_at_config_gain"};
  t.rows.push_back({format_value(s.scene.range_m), format_value(opt.gain), format_value(opt.snr),
                    opt.at_bound ? "true" : "false", format_value(link.snr)});
  emit_table(g, t, "optimize-gain");
  return kOk;
}

int run_sensitivity(const GlobalOptions& g, std::vector<std::string> params, double rel_step) {
  const ScenarioConfig s = base_scenario(g);
  const DetectorChoice d = detectors(s, g, false).front();
  ScenarioConfig probe = s;
  probe.detector = d;
  const bool explicit_list = !params.empty();
  if (!explicit_list) params = sensitivity_parameters();

  Table t;
  t.header = {"parameter", "value", "elasticity", "status"};
  bool any_ok = false;
  for (const std::string& name : params) {
    double value = 0.0;
    try {
      value = parameter_ref(probe, name);
      if (value == 0.0 && !explicit_list) continue;
    } catch (const ConfigError&) {
      if (explicit_list) throw;
      continue;
    }
    try {
      const double e = sensitivity(s, d, s.tdc, name, rel_step);
      t.rows.push_back({name, format_value(value), format_value(e), "ok"});
      any_ok = true;
    } catch (const SolverError& e) {
      std::cerr << "dtof: " << name << ": " << e.what() << '\n';
      t.rows.push_back({name, format_value(value), "nan", "solver_error"});
    }
  }
  emit_table(g, t, "sensitivity");
  return any_ok || t.rows.empty() ? kOk : kSolver;
}

int run_preset(const GlobalOptions& g, const std::string& name) {
  if (name != "table1") throw ConfigError("preset: unknown preset '" + name + "'");
  const DetectorKind kind = g.detector.empty() ? DetectorKind::apd : parse_kind(g.detector);
  ScenarioConfig s = table1_preset(kind);
  s.detector = configure(s.detector, g);
  write_text(g.out, scenario_to_json(s).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct time-of-flight lidar range and SNR calculator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "Scenario file (JSON); baseline preset when omitted");
  app.add_option("--out", g.out, "Output file ('-' for stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "svg"}));
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--detector", g.detector, "Detector")->check(CLI::IsMember({"apd", "sipm"}));
  app.add_option("--sipm-mode", g.sipm_mode, "SiPM SNR model")
      ->check(CLI::IsMember({"analytic", "approx", "monte_carlo"}));
  app.add_option("--trials", g.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string method = "pipeline";
  auto* range = app.add_subcommand("range", "Maximum detectable range");
  range->add_option("--method", method, "Solver")
      ->check(CLI::IsMember({"pipeline", "closed_form"}));

  GridOptions curve_grid;
  auto* snr_curve = app.add_subcommand("snr-curve", "Trigger SNR vs range");
  add_grid_options(snr_curve, curve_grid);

  std::string sweep_kind;
  GridOptions sweep_grid;
  auto* sweep = app.add_subcommand("sweep", "Maximum range vs scan angle or illuminance");
  sweep->add_option("kind", sweep_kind, "Swept variable")
      ->required()
      ->check(CLI::IsMember({"distance", "elevation", "illuminance"}));
  add_grid_options(sweep, sweep_grid);

  GainBounds bounds;
  int gain_curve = 0;
  auto* gain = app.add_subcommand("optimize-gain", "APD gain maximising the trigger SNR");
  gain->add_option("--gain-min", bounds.lo, "Lower gain bound");
  gain->add_option("--gain-max", bounds.hi, "Upper gain bound");
  gain->add_option("--curve", gain_curve, "Emit SNR vs gain on this many points instead")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> params;
  double rel_step = 1e-3;
  auto* sens = app.add_subcommand("sensitivity", "Elasticity of the maximum range");
  sens->add_option("--param", params, "Parameter name (repeatable; default all)");
  sens->add_option("--rel-step", rel_step, "Relative finite-difference step");

  GridOptions photon_grid;
  auto* response = app.add_subcommand("sipm-response", "SiPM fired pixels vs incident photons");
  add_grid_options(response, photon_grid);

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "Print a built-in scenario");
  preset->add_option("name", preset_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*range) return run_range(g, method);
    if (*snr_curve) return run_sweep_command(g, SweepKind::distance, curve_grid);
    if (*sweep) {
      const SweepKind kind = sweep_kind == "distance"    ? SweepKind::distance
                             : sweep_kind == "elevation" ? SweepKind::elevation
                                                         : SweepKind::illuminance;
      return run_sweep_command(g, kind, sweep_grid);
    }
    if (*gain) return run_optimize_gain(g, bounds, gain_curve);
    if (*sens) return run_sensitivity(g, params, rel_step);
    if (*response) return run_sweep_command(g, SweepKind::photon_response, photon_grid);
    if (*preset) return run_preset(g, preset_name);
  } catch (const ConfigError& e) {
    std::cerr << "dtof: " << e.what() << '\n';
    return kValidation;
  } catch (const SolverError& e) {
    std::cerr << "dtof: " << e.what() << '\n';
    return kSolver;
  } catch (const IoError& e) {
    std::cerr << "dtof: " << e.what() << '\n';
    return kIo;
  }
  return kValidation;
}
