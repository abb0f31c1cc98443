#include "dtof/errors.hpp"
#include "dtof/range_solver.hpp"
#include "oracle_values.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dtof;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ScenarioConfig table1(DetectorKind kind) { return table1_preset(kind); }

SipmDetector sipm_mode(SipmSnrMode mode) {
  SipmDetector d = table1_sipm();
  d.snr_mode = mode;
  return d;
}

ApdDetector photon_limited_apd() { return ApdDetector{photon_limited(table1_apd().params)}; }

double rmax(const ScenarioConfig& s, const DetectorChoice& d) {
  return max_range(s, d, s.tdc).r_max_m;
}

ScenarioConfig at_klux(ScenarioConfig s, double klux) {
  s.solar.illuminance_klux = klux;
  return s;
}

}  // namespace

TEST_CASE("link evaluation at 100 m") {
  const ScenarioConfig s = table1(DetectorKind::apd);
  const LinkEvaluation apd = evaluate_link(s, table1_apd(), 100.0);
  CHECK(rel(apd.p_r, oracle::echo_power_r100) < 1e-14);
  CHECK(rel(apd.p_rs, oracle::background_power) < 1e-14);
  CHECK(rel(apd.snr, oracle::apd_snr_r100) < 1e-12);
  const LinkEvaluation sipm = evaluate_link(s, table1_sipm(), 100.0);
  CHECK(rel(sipm.snr, oracle::sipm_snr_r100) < 1e-12);
  CHECK_FALSE(sipm.saturated);
  CHECK(evaluate_link(s, table1_sipm(), 10.0).saturated);
  CHECK(snr_at_range(s, table1_apd(), 100.0) == apd.snr);
}

TEST_CASE("maximum range, baseline") {
  const ScenarioConfig s = table1(DetectorKind::apd);
  const RangeResult apd = max_range(s, table1_apd(), s.tdc);
  const RangeResult sipm = max_range(s, table1_sipm(), s.tdc);
  const RangeResult approx = max_range(s, sipm_mode(SipmSnrMode::approx), s.tdc);
  CHECK(rel(apd.r_max_m, oracle::rmax_apd) < 1e-6);
  CHECK(rel(sipm.r_max_m, oracle::rmax_sipm) < 1e-6);
  CHECK(rel(approx.r_max_m, oracle::rmax_sipm_approx) < 1e-6);
  for (const RangeResult& r : {apd, sipm, approx}) {
    CHECK(std::abs(r.snr_at_rmax - 5.0) <= 5e-6);
    CHECK(r.method == RangeMethod::pipeline);
    CHECK(rel(r.background_power_w, oracle::background_power) < 1e-14);
  }
  CHECK(apd.r_max_m > sipm.r_max_m);
  CHECK_FALSE(apd.saturation_range_m.has_value());
  REQUIRE(sipm.saturation_range_m.has_value());
  CHECK(*sipm.saturation_range_m < sipm.r_max_m);
  const LinkEvaluation edge = evaluate_link(s, table1_sipm(), *sipm.saturation_range_m * 0.999);
  CHECK(edge.saturated);
  CHECK_FALSE(evaluate_link(s, table1_sipm(), *sipm.saturation_range_m * 1.001).saturated);

  CHECK(max_range(table1(DetectorKind::sipm)).r_max_m == sipm.r_max_m);
}

TEST_CASE("solver errors") {
  ScenarioConfig s = table1(DetectorKind::apd);
  SUBCASE("no detection at the minimum range") {
    s.tdc.tnr = 1e6;
    CHECK_THROWS_AS(max_range(s), NoDetectionError);
  }
  SUBCASE("still above threshold at the cap") {
    RangeSolverOptions opt;
    opt.r_cap_m = 200.0;
    CHECK_THROWS_AS(max_range(s, opt), UnboundedRangeError);
  }
  SUBCASE("noiseless scene") {
    s.detector = photon_limited_apd();
    s.solar = SolarModel::direct(0.0);
    CHECK_THROWS_AS(max_range(s), UnboundedRangeError);
  }
}

TEST_CASE("scaling laws") {
  SUBCASE("halving peak power, photon-limited SiPM") {
    ScenarioConfig s = table1(DetectorKind::sipm);
    const SipmDetector d = sipm_mode(SipmSnrMode::approx);
    const double r1 = rmax(s, d);
    s.laser.peak_power_w /= 2;
    CHECK(rel(rmax(s, d), r1 / std::numbers::sqrt2) < 0.005);
  }
  SUBCASE("quadrupling TNR halves the range when SNR ~ 1/R^2") {
    ScenarioConfig s = table1(DetectorKind::apd);
    const double r1 = rmax(s, table1_apd());
    s.tdc.tnr *= 4;
    CHECK(rel(rmax(s, table1_apd()), r1 / 2) < 1e-5);
  }
}

TEST_CASE("closed-form range") {
  const ScenarioConfig s = table1(DetectorKind::apd);
  SUBCASE("sipm equals the approximate-SNR pipeline") {
    RangeSolverOptions tight;
    tight.width_tol_m = 1e-9;
    tight.snr_rel_tol = 1e-12;
    const SipmDetector d = sipm_mode(SipmSnrMode::approx);
    CHECK(rel(closed_form_max_range(s, d), max_range(s, d, s.tdc, tight).r_max_m) < 1e-6);
  }
  SUBCASE("photon-limited apd agrees with the pipeline") {
    const ApdDetector d = photon_limited_apd();
    CHECK(rel(closed_form_max_range(s, d), rmax(s, d)) < 0.01);
  }
  SUBCASE("sipm analytic pipeline within 10% where occupancy is low") {
    for (double klux : {0.1, 0.3, 1.0, 3.0}) {
      const ScenarioConfig low = at_klux(s, klux);
      const double ratio = closed_form_max_range(low, table1_sipm()) / rmax(low, table1_sipm());
      INFO("klux=" << klux << " ratio=" << ratio);
      CHECK(ratio >= 0.9);
      CHECK(ratio <= 1.1);
    }
  }
  SUBCASE("sun irradiance enters with exponent -1/4") {
    for (const DetectorChoice& d : {DetectorChoice{table1_apd()}, DetectorChoice{table1_sipm()}}) {
      const double r1 = closed_form_max_range(s, d);
      const double r4 = closed_form_max_range(at_klux(s, 400.0), d);
      CHECK(rel(r4, r1 / std::numbers::sqrt2) < 1e-9);
    }
  }
  SUBCASE("needs a fixed transmittance") {
    ScenarioConfig e = s;
    e.atmosphere = AtmosphereModel::extinction(1e-4);
    CHECK_THROWS_AS(closed_form_max_range(e, table1_apd()), ConfigError);
  }
}

TEST_CASE("sensitivity exponents in the photon-limited regime") {
  const ScenarioConfig s = table1(DetectorKind::sipm);
  const SipmDetector sipm = sipm_mode(SipmSnrMode::approx);
  CHECK(std::abs(sensitivity(s, sipm, s.tdc, "peak_power") - 0.5) < 1e-3);
  CHECK(std::abs(sensitivity(s, sipm, s.tdc, "reflectivity") - 0.25) < 1e-3);
  CHECK(std::abs(sensitivity(s, sipm, s.tdc, "pde") - 0.25) < 1e-3);
  CHECK(std::abs(sensitivity(s, sipm, s.tdc, "sun_irradiance") + 0.25) < 1e-3);
  CHECK(std::abs(sensitivity(s, sipm, s.tdc, "tnr") + 0.5) < 1e-3);
  CHECK(std::abs(sensitivity(s, sipm, s.tdc, "repetition_rate")) < 1e-12);

  const ApdDetector apd = photon_limited_apd();
  CHECK(std::abs(sensitivity(s, apd, s.tdc, "peak_power") - 0.5) < 1e-3);
  CHECK(std::abs(sensitivity(s, apd, s.tdc, "reflectivity") - 0.25) < 1e-3);
  CHECK(std::abs(sensitivity(s, apd, s.tdc, "quantum_efficiency") - 0.25) < 1e-3);
  CHECK(std::abs(sensitivity(s, apd, s.tdc, "sun_irradiance") + 0.25) < 1e-3);
}

TEST_CASE("sensitivity registry") {
  const ScenarioConfig s = table1(DetectorKind::apd);
  const auto names = sensitivity_parameters();
  CHECK(names.size() >= 30);
  CHECK_THROWS_WITH_AS(sensitivity(s, table1_apd(), s.tdc, "warp_factor"),
                       doctest::Contains("unknown parameter"), ConfigError);
  CHECK_THROWS_AS(sensitivity(s, table1_sipm(), s.tdc, "gain"), ConfigError);
  CHECK_THROWS_AS(sensitivity(s, table1_apd(), s.tdc, "pde"), ConfigError);
  CHECK_THROWS_AS(sensitivity(s, table1_apd(), s.tdc, "extinction_coeff"), ConfigError);
  CHECK_THROWS_AS(sensitivity(s, table1_apd(), s.tdc, "peak_power", 0.0), ConfigError);
  CHECK_THROWS_AS(sensitivity(s, table1_apd(), s.tdc, "peak_power", 0.2), ConfigError);

  ScenarioConfig m = s;
  parameter_ref(m, "peak_power") = 90.0;
  CHECK(m.laser.peak_power_w == 90.0);
}

TEST_CASE("range responds monotonically to design parameters") {
  const ScenarioConfig base = table1(DetectorKind::apd);
  struct Knob {
    const char* name;
    bool increasing;
  };
  for (const Knob& k : {Knob{"peak_power", true}, Knob{"reflectivity", true},
                        Knob{"laser_efficiency", true}, Knob{"aperture_radius", true},
                        Knob{"sun_irradiance", false}, Knob{"tnr", false}}) {
    for (const DetectorChoice& d : {DetectorChoice{table1_apd()}, DetectorChoice{table1_sipm()}}) {
      double previous = k.increasing ? 0.0 : 1e300;
      for (double f : {0.5, 0.7, 0.85, 1.0}) {
        ScenarioConfig s = base;
        s.detector = d;
        parameter_ref(s, k.name) *= f;
        const double r = rmax(s, d);
        INFO(k.name << " x" << f);
        if (k.increasing) {
          CHECK(r >= previous);
        } else {
          CHECK(r <= previous);
        }
        previous = r;
      }
    }
  }
}

TEST_CASE("edge falloff with the cosine aperture") {
  ScenarioConfig s = table1(DetectorKind::apd);
  s.optics.aperture_model = ApertureModel::cosine;
  for (const DetectorChoice& d : {DetectorChoice{table1_apd()}, DetectorChoice{table1_sipm()}}) {
    const double centre = rmax(s, d);
    double previous = centre;
    for (double deg = 5.0; deg <= 60.0; deg += 5.0) {
      ScenarioConfig up = s;
      ScenarioConfig down = s;
      up.scene.elevation_angle_rad = deg * std::numbers::pi / 180.0;
      down.scene.elevation_angle_rad = -up.scene.elevation_angle_rad;
      const double r = rmax(up, d);
      CHECK(r <= previous);
      CHECK(r <= centre);
      CHECK(rmax(down, d) == r);
      previous = r;
    }
  }
}

TEST_CASE("unique illuminance crossover") {
  const ScenarioConfig s = table1(DetectorKind::apd);
  const Eigen::ArrayXd klux = Eigen::ArrayXd::LinSpaced(50, std::log(0.01), std::log(100.0)).exp();
  int sign_changes = 0;
  int previous = 0;
  for (double e : klux) {
    const ScenarioConfig at = at_klux(s, e);
    const int sign = rmax(at, table1_sipm()) > rmax(at, table1_apd()) ? 1 : -1;
    if (previous != 0 && sign != previous) ++sign_changes;
    previous = sign;
  }
  CHECK(sign_changes == 1);
  CHECK(rmax(at_klux(s, 0.01), table1_sipm()) > rmax(at_klux(s, 0.01), table1_apd()));
  CHECK(rmax(at_klux(s, 100.0), table1_apd()) > rmax(at_klux(s, 100.0), table1_sipm()));
}
