#include "dtof/emit.hpp"

#include "dtof/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

namespace dtof {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
}

const char* axis_name(SweepKind kind) {
  switch (kind) {
    case SweepKind::distance: return "range_m";
    case SweepKind::elevation: return "elevation_deg";
    case SweepKind::illuminance: return "illuminance_klux";
    case SweepKind::photon_response: return "n_photon";
  }
  return "";
}

std::string value_column(SweepKind kind, const std::string& label) {
  return kind == SweepKind::distance ? "snr_" + label : "rmax_" + label + "_m";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Axis {
  bool log = false;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> ticks;

  double unit(double v) const {
    return log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
  }
  bool plottable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

Axis make_axis(bool log, double lo, double hi) {
  Axis a;
  a.log = log;
  if (!(lo <= hi)) {
    lo = log ? 1.0 : 0.0;
    hi = log ? 10.0 : 1.0;
  }
  if (log) {
    a.lo = std::floor(std::log10(lo));
    a.hi = std::ceil(std::log10(hi));
    if (a.hi <= a.lo) a.hi = a.lo + 1.0;
    const double stride = std::max(1.0, std::ceil((a.hi - a.lo) / 8.0));
    for (double e = a.lo; e <= a.hi + 1e-9; e += stride) a.ticks.push_back(std::pow(10.0, e));
    return a;
  }
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double step = nice_step(hi - lo);
  a.lo = std::floor(lo / step) * step;
  a.hi = std::ceil(hi / step) * step;
  for (double t = a.lo; t <= a.hi + step * 1e-9; t += step) {
    a.ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  }
  return a;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                    "#000000"};

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) append_row(out, row);
  return out;
}

std::string to_csv(const SweepResult& r) {
  Table t;
  if (r.kind == SweepKind::photon_response) {
    t.header = {"n_photon", "n_fired", "curve_label"};
    for (const auto& c : r.curves) {
      for (Eigen::Index i = 0; i < r.grid.size(); ++i) {
        t.rows.push_back({format_value(r.grid(i)), format_value(c.n_fired(i)), c.label});
      }
    }
    return to_csv(t);
  }
  t.header.push_back(axis_name(r.kind));
  for (const auto& label : r.labels) t.header.push_back(value_column(r.kind, label));
  t.header.push_back("status");
  for (Eigen::Index i = 0; i < r.grid.size(); ++i) {
    std::vector<std::string> row{format_value(r.grid(i))};
    for (Eigen::Index d = 0; d < r.values.cols(); ++d) row.push_back(format_value(r.values(i, d)));
    row.push_back(i < static_cast<Eigen::Index>(r.status.size()) ? r.status[i] : "");
    t.rows.push_back(std::move(row));
  }
  return to_csv(t);
}

std::string to_svg(const Chart& chart) {
  constexpr double width = 760, height = 460;
  constexpr double left = 80, right = 220, top = 44, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  auto usable = [](bool log, double v) { return std::isfinite(v) && (!log || v > 0.0); };
  for (const auto& s : chart.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(chart.log_x, s.x[i]) || !usable(chart.log_y, s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  for (const auto& [name, y] : chart.reference_lines) {
    if (!usable(chart.log_y, y)) continue;
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  const Axis ax = make_axis(chart.log_x, x_lo, x_hi);
  const Axis ay = make_axis(chart.log_y, y_lo, y_hi);
  auto px = [&](double v) { return left + ax.unit(v) * pw; };
  auto py = [&](double v) { return top + (1.0 - ay.unit(v)) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width) + "\" height=\"" +
       fixed(height) + "\" viewBox=\"0 0 " + fixed(width) + " " + fixed(height) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
       xml_escape(chart.title) + "</text>\n";

  for (double t : ax.ticks) {
    const double x = px(t);
    o += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(top) + "\" x2=\"" + fixed(x) + "\" y2=\"" +
         fixed(top + ph) + "\" stroke=\"#dddddd\"/>\n";
    o += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(top + ph + 18) +
         "\" text-anchor=\"middle\">" + tick_label(t) + "</text>\n";
  }
  for (double t : ay.ticks) {
    const double y = py(t);
    o += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(left + pw) +
         "\" y2=\"" + fixed(y) + "\" stroke=\"#dddddd\"/>\n";
    o += "<text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(y + 4) + "\" text-anchor=\"end\">" +
         tick_label(t) + "</text>\n";
  }
  o += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(pw) +
       "\" height=\"" + fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  o += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(height - 16) +
       "\" text-anchor=\"middle\">" + xml_escape(chart.x_label) + "</text>\n";
  o += "<text transform=\"translate(20 " + fixed(top + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + xml_escape(chart.y_label) + "</text>\n";

  for (const auto& [name, y] : chart.reference_lines) {
    if (!usable(chart.log_y, y)) continue;
    o += "<line x1=\"" + fixed(left) + "\" y1=\"" + fixed(py(y)) + "\" x2=\"" + fixed(left + pw) +
         "\" y2=\"" + fixed(py(y)) + "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
    o += "<text x=\"" + fixed(left + pw - 4) + "\" y=\"" + fixed(py(y) - 4) +
         "\" text-anchor=\"end\">" + xml_escape(name) + "</text>\n";
  }

  constexpr std::size_t n_colors = sizeof kPalette / sizeof kPalette[0];
  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* color = kPalette[k % n_colors];
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        o += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.8\" points=\"" + points + "\"/>\n";
      }
      points.clear();
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(chart.log_x, s.x[i]) || !usable(chart.log_y, s.y[i])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fixed(px(s.x[i])) + "," + fixed(py(s.y[i]));
    }
    flush();
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    o += "<line x1=\"" + fixed(left + pw + 12) + "\" y1=\"" + fixed(ly) + "\" x2=\"" +
         fixed(left + pw + 36) + "\" y2=\"" + fixed(ly) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fixed(left + pw + 42) + "\" y=\"" + fixed(ly + 4) + "\">" +
         xml_escape(s.label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

std::string to_svg(const SweepResult& r) {
  Chart c;
  const std::vector<double> x(r.grid.data(), r.grid.data() + r.grid.size());
  switch (r.kind) {
    case SweepKind::distance:
      c.title = "Trigger SNR vs range";
      c.x_label = "range (m)";
      c.y_label = "trigger SNR";
      c.log_x = c.log_y = true;
      c.reference_lines.push_back({"TNR", r.threshold});
      break;
    case SweepKind::elevation:
      c.title = "Maximum range vs scan angle";
      c.x_label = "elevation angle (deg)";
      c.y_label = "maximum range (m)";
      break;
    case SweepKind::illuminance:
      c.title = "Maximum range vs background illuminance";
      c.x_label = "illuminance (klux)";
      c.y_label = "maximum range (m)";
      c.log_x = true;
      break;
    case SweepKind::photon_response:
      c.title = "SiPM photon response";
      c.x_label = "incident photons";
      c.y_label = "fired pixels";
      c.log_x = c.log_y = true;
      for (const auto& curve : r.curves) {
        c.series.push_back({curve.label, x,
                            std::vector<double>(curve.n_fired.data(),
                                                curve.n_fired.data() + curve.n_fired.size())});
      }
      return to_svg(c);
  }
  for (Eigen::Index d = 0; d < r.values.cols(); ++d) {
    ChartSeries s;
    s.label = r.labels[d];
    s.x = x;
    for (Eigen::Index i = 0; i < r.values.rows(); ++i) s.y.push_back(r.values(i, d));
    c.series.push_back(std::move(s));
  }
  return to_svg(c);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  write_text(path, to_csv(result));
}

void emit_svg(const SweepResult& result, const std::filesystem::path& path) {
  write_text(path, to_svg(result));
}

}  // namespace dtof
