#include "dtof/emit.hpp"
#include "dtof/errors.hpp"
#include "dtof/sweep.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dtof;
namespace fs = std::filesystem;

namespace {

std::vector<DetectorChoice> both() { return {table1_apd(), table1_sipm()}; }

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("grids") {
  CHECK(make_grid(GridSpec::range(1.0, 5.0, 5, GridSpacing::linear)).isApprox(
      Eigen::ArrayXd::LinSpaced(5, 1.0, 5.0)));
  const Eigen::ArrayXd g = make_grid(GridSpec::range(0.01, 100.0, 5, GridSpacing::log));
  CHECK(g(0) == 0.01);
  CHECK(g(4) == 100.0);
  CHECK(g(2) == doctest::Approx(1.0));
  CHECK(make_grid(GridSpec::list({3.0, 2.0, 1.0})).size() == 3);
  CHECK(make_grid(GridSpec::range(7.0, 9.0, 1, GridSpacing::log)).size() == 1);
  CHECK_THROWS_AS(make_grid(GridSpec::list({1.0, 1.0})), ConfigError);
  CHECK_THROWS_AS(make_grid(GridSpec::list({1.0, 3.0, 2.0})), ConfigError);
  CHECK_THROWS_AS(make_grid(GridSpec::range(0.0, 1.0, 5, GridSpacing::log)), ConfigError);
  CHECK_THROWS_AS(make_grid(GridSpec{}), ConfigError);
}

TEST_CASE("distance sweep") {
  const ScenarioConfig s = table1_preset(DetectorKind::apd);
  const SweepResult r = run_sweep(s, default_sweep(SweepKind::distance, both()));
  CHECK(r.values.rows() == r.grid.size());
  CHECK(r.values.cols() == 2);
  CHECK(r.threshold == 5.0);
  for (Eigen::Index i = 0; i < r.grid.size(); ++i) CHECK(r.values(i, 0) > r.values(i, 1));
  CHECK(r.status.front() == "sipm:saturated");
  CHECK(r.status.back() == "ok");
  REQUIRE(r.saturation_range_m[1].has_value());
  CHECK_FALSE(r.saturation_range_m[0].has_value());

  const std::string csv = to_csv(r);
  CHECK(first_line(csv) == "range_m,snr_apd,snr_sipm,status");
  CHECK(line_count(csv) == static_cast<std::size_t>(r.grid.size()) + 1);
}

TEST_CASE("single-point sweep equals a direct evaluation") {
  const ScenarioConfig s = table1_preset(DetectorKind::apd);
  SweepSpec spec = default_sweep(SweepKind::distance, both());
  spec.grid = GridSpec::list({137.0});
  const SweepResult r = run_sweep(s, spec);
  REQUIRE(r.values.rows() == 1);
  CHECK(r.values(0, 0) == snr_at_range(s, table1_apd(), 137.0));
  CHECK(r.values(0, 1) == snr_at_range(s, table1_sipm(), 137.0));
  CHECK(line_count(to_csv(r)) == 2);
}

TEST_CASE("elevation and illuminance sweeps") {
  const ScenarioConfig s = table1_preset(DetectorKind::sipm);
  const SweepResult e = run_sweep(s, default_sweep(SweepKind::elevation, both()));
  CHECK(first_line(to_csv(e)) == "elevation_deg,rmax_apd_m,rmax_sipm_m,status");
  const Eigen::Index mid = e.grid.size() / 2;
  CHECK(e.grid(mid) == 0.0);
  CHECK(e.values(0, 0) < e.values(mid, 0));
  CHECK(e.values(0, 0) == e.values(e.grid.size() - 1, 0));

  const SweepResult il = run_sweep(s, default_sweep(SweepKind::illuminance, both()));
  CHECK(first_line(to_csv(il)) == "illuminance_klux,rmax_apd_m,rmax_sipm_m,status");
  CHECK(il.values(0, 1) > il.values(0, 0));
  CHECK(il.values(il.grid.size() - 1, 0) > il.values(il.grid.size() - 1, 1));
  CHECK_FALSE(il.all_failed());
}

TEST_CASE("per-point solver errors become row status") {
  ScenarioConfig s = table1_preset(DetectorKind::apd);
  s.tdc.tnr = 1e9;
  SweepSpec spec = default_sweep(SweepKind::illuminance, both());
  spec.grid = GridSpec::range(1.0, 100.0, 3, GridSpacing::log);
  const SweepResult r = run_sweep(s, spec);
  CHECK(r.status[0] == "apd:no_detection;sipm:no_detection");
  CHECK(r.all_failed());
  CHECK(to_csv(r).find("nan,nan,apd:no_detection") != std::string::npos);
}

TEST_CASE("photon response families") {
  SweepSpec spec = default_sweep(SweepKind::photon_response, {});
  const SweepResult r = run_sweep(table1_preset(DetectorKind::sipm), spec);
  CHECK(r.curves.size() == spec.families.size());
  const std::string csv = to_csv(r);
  CHECK(first_line(csv) == "n_photon,n_fired,curve_label");
  CHECK(line_count(csv) == spec.families.size() * static_cast<std::size_t>(r.grid.size()) + 1);

  // 22 %, 100 pixels, no background: saturates at the pixel count.
  const auto it = std::find_if(r.curves.begin(), r.curves.end(), [](const PhotonCurve& c) {
    return c.label == "pde=0.22;n_pixels=100;n_b_photon=0";
  });
  REQUIRE(it != r.curves.end());
  CHECK(it->n_fired(r.grid.size() - 1) == doctest::Approx(100.0));
  for (Eigen::Index i = 1; i < r.grid.size(); ++i) CHECK(it->n_fired(i) >= it->n_fired(i - 1));
}

TEST_CASE("parallel sweeps are byte-identical to serial ones") {
  const ScenarioConfig s = table1_preset(DetectorKind::apd);
  SweepSpec spec = default_sweep(SweepKind::illuminance, both());
  const std::string serial = to_csv(run_sweep(s, spec));
  spec.threads = 4;
  CHECK(to_csv(run_sweep(s, spec)) == serial);
  CHECK(to_csv(run_sweep(s, spec)) == serial);
}

TEST_CASE("emitters") {
  SUBCASE("empty result is header only") {
    SweepResult r;
    r.labels = {"apd", "sipm"};
    CHECK(to_csv(r) == "range_m,snr_apd,snr_sipm,status\n");
    SweepResult photons;
    photons.kind = SweepKind::photon_response;
    CHECK(to_csv(photons) == "n_photon,n_fired,curve_label\n");
  }
  SUBCASE("svg is well formed and deterministic") {
    const ScenarioConfig s = table1_preset(DetectorKind::apd);
    const SweepResult r = run_sweep(s, default_sweep(SweepKind::distance, both()));
    const std::string svg = to_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("TNR") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(to_svg(r) == svg);
  }
  SUBCASE("files") {
    const ScenarioConfig s = table1_preset(DetectorKind::apd);
    const SweepResult r = run_sweep(s, default_sweep(SweepKind::elevation, both()));
    const fs::path dir = fs::temp_directory_path() / "dtof_emit_test";
    fs::create_directories(dir);
    emit_csv(r, dir / "e.csv");
    emit_svg(r, dir / "e.svg");
    CHECK(slurp(dir / "e.csv") == to_csv(r));
    CHECK(slurp(dir / "e.svg") == to_svg(r));
    CHECK_THROWS_WITH_AS(emit_csv(r, "/nonexistent/dtof/e.csv"), doctest::Contains("/nonexistent"),
                         IoError);
  }
  SUBCASE("number formatting") {
    CHECK(format_value(350.60456463121545) == "350.6045646");
    CHECK(format_value(std::nan("")) == "nan");
    CHECK(format_value(std::numeric_limits<double>::infinity()) == "inf");
  }
}
