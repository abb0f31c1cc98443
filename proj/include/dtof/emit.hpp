#pragma once

#include "dtof/sweep.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dtof {

/// "%.10g"; non-finite values print as nan / inf / -inf.
std::string format_value(double v);

/// Plain table for single-shot CLI results.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);

/// Fixed header per sweep kind:
///   distance        range_m,snr_<det>...,status
///   elevation       elevation_deg,rmax_<det>_m...,status
///   illuminance     illuminance_klux,rmax_<det>_m...,status
///   photon_response n_photon,n_fired,curve_label
std::string to_csv(const SweepResult& result);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<ChartSeries> series;
  std::vector<std::pair<std::string, double>> reference_lines;  // horizontal
};

/// Line chart; non-finite points (and non-positive ones on log axes) break
/// the line.
std::string to_svg(const Chart& chart);

/// Log axes follow the figures: distance log-log, illuminance log x,
/// photon response log-log, elevation linear.
std::string to_svg(const SweepResult& result);

/// Writes text to `path`, or to stdout when path is empty or "-".
void write_text(const std::filesystem::path& path, const std::string& text);

void emit_csv(const SweepResult& result, const std::filesystem::path& path);
void emit_svg(const SweepResult& result, const std::filesystem::path& path);

}  // namespace dtof
