#include "dtof/scenario_io.hpp"

#include "check.hpp"
#include "units.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dtof {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

/// Strict reader over one JSON object: tracks consumed keys so that leftovers
/// can be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  double number(const char* key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(qualified(key) + ": expected a number");
    return v.get<double>();
  }

  double number_or(const char* key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const char* key) {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(qualified(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t integer_or(const char* key, std::int64_t fallback) {
    return has(key) ? integer(key) : fallback;
  }

  std::uint64_t unsigned_or(const char* key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(qualified(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const char* key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(qualified(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string string_or(const char* key, std::string fallback) {
    return has(key) ? string(key) : std::move(fallback);
  }

  Section section(const char* key) { return Section(at_section(key), qualified(key)); }

  const json& raw(const char* key) { return at(key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) throw ConfigError("unknown key '" + qualified(key) + "'");
    }
  }

  std::string qualified(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

 private:
  const json& at(const char* key) {
    seen_.insert(key);
    if (!obj_.contains(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
    return obj_.at(key);
  }

  const json& at_section(const char* key) {
    seen_.insert(key);
    if (!obj_.contains(key)) {
      throw ConfigError("missing required section '" + qualified(key) + "'");
    }
    return obj_.at(key);
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Enum, std::size_t N>
Enum parse_enum(const std::string& text, const std::string& where,
                const std::pair<const char*, Enum> (&table)[N]) {
  std::string allowed;
  for (const auto& [name, value] : table) {
    if (text == name) return value;
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw ConfigError(where + ": unknown value '" + text + "' (expected one of " + allowed + ")");
}

template <typename Enum, std::size_t N>
const char* enum_name(Enum value, const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "";
}

constexpr std::pair<const char*, AtmosphereMode> kAtmosphereModes[] = {
    {"fixed_transmittance", AtmosphereMode::fixed_transmittance},
    {"extinction", AtmosphereMode::extinction}};
constexpr std::pair<const char*, ApertureModel> kApertureModels[] = {
    {"constant", ApertureModel::constant}, {"cosine", ApertureModel::cosine}};
constexpr std::pair<const char*, SolarMode> kSolarModes[] = {
    {"direct_irradiance", SolarMode::direct_irradiance},
    {"spectrum_integral", SolarMode::spectrum_integral},
    {"illuminance_scaled", SolarMode::illuminance_scaled}};
constexpr std::pair<const char*, ExcessNoiseMode> kExcessModes[] = {
    {"power_law", ExcessNoiseMode::power_law}, {"ionization", ExcessNoiseMode::ionization}};
constexpr std::pair<const char*, SipmSnrMode> kSnrModes[] = {
    {"analytic", SipmSnrMode::analytic},
    {"approx", SipmSnrMode::approx},
    {"monte_carlo", SipmSnrMode::monte_carlo}};
constexpr std::pair<const char*, PulseShape> kPulseShapes[] = {
    {"rectangular", PulseShape::rectangular}, {"gaussian", PulseShape::gaussian}};
constexpr std::pair<const char*, DetectorKind> kDetectorKinds[] = {{"apd", DetectorKind::apd},
                                                                  {"sipm", DetectorKind::sipm}};

SipmMcConfig monte_carlo_from(Section s) {
  SipmMcConfig mc;
  mc.n_trials = s.integer_or("n_trials", mc.n_trials);
  if (s.has("time_step_ns")) mc.time_step_s = units::nano.from(s.number("time_step_ns"));
  if (s.has("warmup_ns")) mc.warmup_s = units::nano.from(s.number("warmup_ns"));
  if (s.has("pulse_shape")) {
    mc.pulse_shape = parse_enum(s.string("pulse_shape"), s.qualified("pulse_shape"), kPulseShapes);
  }
  mc.seed = s.unsigned_or("seed", mc.seed);
  mc.background_windows =
      static_cast<int>(s.integer_or("background_windows", mc.background_windows));
  const std::int64_t threads = s.integer_or("threads", mc.threads);
  if (threads < 1) throw ConfigError(s.qualified("threads") + ": must be >= 1");
  mc.threads = static_cast<unsigned>(threads);
  s.finish();
  return mc;
}

DetectorChoice detector_from(Section s) {
  const DetectorKind kind = parse_enum(s.string("type"), s.qualified("type"), kDetectorKinds);
  if (kind == DetectorKind::apd) {
    ApdDetector d;
    auto& p = d.params;
    p.gain = s.number("gain");
    p.quantum_efficiency = units::percent.from(s.number("quantum_efficiency_pct"));
    p.excess_noise_mode = parse_enum(s.string_or("excess_noise_mode", "power_law"),
                                     s.qualified("excess_noise_mode"), kExcessModes);
    p.excess_noise_index = s.number_or("excess_noise_index", p.excess_noise_index);
    p.electron_ionization_rate =
        s.number_or("electron_ionization_rate", p.electron_ionization_rate);
    p.surface_dark_current_a = units::nano.from(s.number("surface_dark_current_na"));
    p.bulk_dark_current_a = units::nano.from(s.number("bulk_dark_current_na"));
    p.load_resistance_ohm = s.number("load_resistance_ohm");
    p.temperature_k = s.number_or("temperature_k", 300.0);
    p.amplifier_noise_a = units::nano.from(s.number_or("amplifier_noise_na", 0.0));
    s.finish();
    return d;
  }
  SipmDetector d;
  d.params.n_pixels = s.integer("n_pixels");
  d.params.pde = units::percent.from(s.number("pde_pct"));
  d.params.dead_time_s = units::nano.from(s.number("dead_time_ns"));
  d.params.dark_count_rate_cps = s.number("dark_count_rate_cps");
  d.snr_mode = parse_enum(s.string_or("snr_mode", "analytic"), s.qualified("snr_mode"), kSnrModes);
  if (s.has("monte_carlo")) d.monte_carlo = monte_carlo_from(s.section("monte_carlo"));
  s.finish();
  return d;
}

SolarModel solar_from(Section s, const std::filesystem::path& base_dir) {
  SolarModel solar;
  solar.mode = parse_enum(s.string("mode"), s.qualified("mode"), kSolarModes);
  switch (solar.mode) {
    case SolarMode::direct_irradiance:
      solar.in_band_irradiance_w_m2 = s.number("irradiance_w_m2");
      break;
    case SolarMode::illuminance_scaled:
      solar.illuminance_klux = s.number("illuminance_klux");
      solar.reference_klux = s.number_or("reference_klux", 100.0);
      solar.reference_irradiance_w_m2 = s.number_or("reference_irradiance_w_m2", 29.4);
      break;
    case SolarMode::spectrum_integral:
      if (s.has("spectrum_csv")) {
        solar.spectrum_source = s.string("spectrum_csv");
        std::filesystem::path p(solar.spectrum_source);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        solar.spectrum = read_spectrum_csv(p);
      } else {
        const json& rows = s.raw("spectrum");
        if (!rows.is_array()) throw ConfigError(s.qualified("spectrum") + ": expected an array");
        for (const auto& row : rows) {
          if (!row.is_array() || row.size() != 3 || !row[0].is_number() ||
              !row[1].is_number() || !row[2].is_number()) {
            throw ConfigError(s.qualified("spectrum") +
                              ": rows must be [wavelength_nm, irradiance_w_m2_nm, transmittance]");
          }
          solar.spectrum.push_back(
              {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
      }
      break;
  }
  s.finish();
  return solar;
}

}  // namespace

DetectorChoice detector_from_json(const nlohmann::json& block) {
  DetectorChoice d = detector_from(Section(block, "detector"));
  validate(d);
  return d;
}

ScenarioConfig scenario_from_json(const json& doc, const std::filesystem::path& base_dir) {
  Section root(doc, "");
  const std::int64_t version = root.integer("schema_version");
  if (version != kScenarioSchemaVersion) {
    throw ConfigError("schema_version: unsupported version " + std::to_string(version) +
                      " (expected " + std::to_string(kScenarioSchemaVersion) + ")");
  }
  ScenarioConfig c;
  c.name = root.string_or("name", "");

  {
    Section s = root.section("scene");
    c.scene.range_m = s.number_or("range_m", 100.0);
    c.scene.incidence_angle_rad = units::degrees.from(s.number_or("incidence_angle_deg", 0.0));
    c.scene.elevation_angle_rad = units::degrees.from(s.number_or("elevation_angle_deg", 0.0));
    c.scene.sun_angle_rad = units::degrees.from(s.number("sun_angle_deg"));
    s.finish();
  }
  {
    Section s = root.section("atmosphere");
    c.atmosphere.mode = parse_enum(s.string("mode"), s.qualified("mode"), kAtmosphereModes);
    if (c.atmosphere.mode == AtmosphereMode::fixed_transmittance) {
      c.atmosphere.one_way_transmittance =
          units::percent.from(s.number("one_way_transmittance_pct"));
    } else {
      c.atmosphere.one_way_transmittance = 1.0;
      c.atmosphere.extinction_coeff_per_m = s.number("extinction_coeff_per_m");
    }
    s.finish();
  }
  {
    Section s = root.section("optics");
    c.optics.aperture_radius_m = s.number("aperture_radius_m");
    c.optics.focal_length_m = s.number("focal_length_m");
    c.optics.detector_radius_m = units::milli.from(s.number("detector_radius_mm"));
    c.optics.laser_efficiency = units::percent.from(s.number("laser_efficiency_pct"));
    c.optics.sun_efficiency = units::percent.from(s.number("sun_efficiency_pct"));
    c.optics.aperture_model =
        parse_enum(s.string("aperture_model"), s.qualified("aperture_model"), kApertureModels);
    s.finish();
  }
  {
    Section s = root.section("target");
    c.target.reflectivity = units::percent.from(s.number("reflectivity_pct"));
    s.finish();
  }
  {
    Section s = root.section("laser");
    c.laser.peak_power_w = s.number("peak_power_w");
    c.laser.wavelength_m = units::nano.from(s.number("wavelength_nm"));
    c.laser.pulse_fwhm_s = units::nano.from(s.number("pulse_width_ns"));
    c.laser.repetition_hz = units::kilo.from(s.number_or("repetition_khz", 0.0));
    s.finish();
  }
  c.solar = solar_from(root.section("solar"), base_dir);
  c.bandwidth_hz = units::mega.from(root.number("bandwidth_mhz"));
  {
    Section s = root.section("tdc");
    c.tdc.tnr = s.number("tnr");
    c.tdc.window_s = units::micro.from(s.number_or("window_us", 4.0));
    c.tdc.limit_detection_prob = units::percent.from(s.number_or("limit_detection_prob_pct", 50.0));
    c.tdc.bandwidth_hz = c.bandwidth_hz;
    s.finish();
  }
  c.detector = detector_from(root.section("detector"));
  root.finish();

  validate(c);
  return c;
}

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  return scenario_from_json(doc, base_dir);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario(buffer.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

ojson detector_to_json(const DetectorChoice& detector) {
  ojson d;
  if (const auto* apd = std::get_if<ApdDetector>(&detector)) {
    const auto& p = apd->params;
    d["type"] = "apd";
    d["gain"] = p.gain;
    d["quantum_efficiency_pct"] = units::percent.to(p.quantum_efficiency);
    d["excess_noise_mode"] = enum_name(p.excess_noise_mode, kExcessModes);
    d["excess_noise_index"] = p.excess_noise_index;
    d["electron_ionization_rate"] = p.electron_ionization_rate;
    d["surface_dark_current_na"] = units::nano.to(p.surface_dark_current_a);
    d["bulk_dark_current_na"] = units::nano.to(p.bulk_dark_current_a);
    d["load_resistance_ohm"] = p.load_resistance_ohm;
    d["temperature_k"] = p.temperature_k;
    d["amplifier_noise_na"] = units::nano.to(p.amplifier_noise_a);
    return d;
  }
  const auto& sipm = std::get<SipmDetector>(detector);
  d["type"] = "sipm";
  d["n_pixels"] = sipm.params.n_pixels;
  d["pde_pct"] = units::percent.to(sipm.params.pde);
  d["dead_time_ns"] = units::nano.to(sipm.params.dead_time_s);
  d["dark_count_rate_cps"] = sipm.params.dark_count_rate_cps;
  d["snr_mode"] = enum_name(sipm.snr_mode, kSnrModes);
  const auto& mc = sipm.monte_carlo;
  ojson m;
  m["n_trials"] = mc.n_trials;
  if (mc.time_step_s) m["time_step_ns"] = units::nano.to(*mc.time_step_s);
  if (mc.warmup_s) m["warmup_ns"] = units::nano.to(*mc.warmup_s);
  m["pulse_shape"] = enum_name(mc.pulse_shape, kPulseShapes);
  m["seed"] = mc.seed;
  m["background_windows"] = mc.background_windows;
  m["threads"] = mc.threads;
  d["monte_carlo"] = std::move(m);
  return d;
}

ojson scenario_to_json(const ScenarioConfig& c) {
  ojson doc;
  doc["schema_version"] = kScenarioSchemaVersion;
  doc["name"] = c.name;
  doc["scene"] = {
      {"range_m", c.scene.range_m},
      {"incidence_angle_deg", units::degrees.to(c.scene.incidence_angle_rad)},
      {"elevation_angle_deg", units::degrees.to(c.scene.elevation_angle_rad)},
      {"sun_angle_deg", units::degrees.to(c.scene.sun_angle_rad)},
  };
  ojson atm;
  atm["mode"] = enum_name(c.atmosphere.mode, kAtmosphereModes);
  if (c.atmosphere.mode == AtmosphereMode::fixed_transmittance) {
    atm["one_way_transmittance_pct"] = units::percent.to(c.atmosphere.one_way_transmittance);
  } else {
    atm["extinction_coeff_per_m"] = c.atmosphere.extinction_coeff_per_m;
  }
  doc["atmosphere"] = std::move(atm);
  doc["optics"] = {
      {"aperture_radius_m", c.optics.aperture_radius_m},
      {"focal_length_m", c.optics.focal_length_m},
      {"detector_radius_mm", units::milli.to(c.optics.detector_radius_m)},
      {"laser_efficiency_pct", units::percent.to(c.optics.laser_efficiency)},
      {"sun_efficiency_pct", units::percent.to(c.optics.sun_efficiency)},
      {"aperture_model", enum_name(c.optics.aperture_model, kApertureModels)},
  };
  doc["target"] = {{"reflectivity_pct", units::percent.to(c.target.reflectivity)}};
  doc["laser"] = {
      {"peak_power_w", c.laser.peak_power_w},
      {"wavelength_nm", units::nano.to(c.laser.wavelength_m)},
      {"pulse_width_ns", units::nano.to(c.laser.pulse_fwhm_s)},
      {"repetition_khz", units::kilo.to(c.laser.repetition_hz)},
  };
  ojson solar;
  solar["mode"] = enum_name(c.solar.mode, kSolarModes);
  switch (c.solar.mode) {
    case SolarMode::direct_irradiance:
      solar["irradiance_w_m2"] = c.solar.in_band_irradiance_w_m2;
      break;
    case SolarMode::illuminance_scaled:
      solar["illuminance_klux"] = c.solar.illuminance_klux;
      solar["reference_klux"] = c.solar.reference_klux;
      solar["reference_irradiance_w_m2"] = c.solar.reference_irradiance_w_m2;
      break;
    case SolarMode::spectrum_integral:
      if (!c.solar.spectrum_source.empty()) {
        solar["spectrum_csv"] = c.solar.spectrum_source;
      } else {
        ojson rows = ojson::array();
        for (const auto& r : c.solar.spectrum) {
          rows.push_back({r.wavelength_nm, r.irradiance_w_m2_nm, r.transmittance});
        }
        solar["spectrum"] = std::move(rows);
      }
      break;
  }
  doc["solar"] = std::move(solar);
  doc["bandwidth_mhz"] = units::mega.to(c.bandwidth_hz);
  doc["tdc"] = {
      {"tnr", c.tdc.tnr},
      {"window_us", units::micro.to(c.tdc.window_s)},
      {"limit_detection_prob_pct", units::percent.to(c.tdc.limit_detection_prob)},
  };
  doc["detector"] = detector_to_json(c.detector);
  return doc;
}

void save_scenario(const ScenarioConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << scenario_to_json(config).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dtof
