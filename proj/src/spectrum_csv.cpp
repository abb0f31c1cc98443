#include "dtof/errors.hpp"
#include "dtof/scene_link.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace dtof {

namespace {

constexpr std::string_view kHeader = "wavelength_nm,irradiance_w_m2_nm,transmittance";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

double parse_field(std::string_view text, const std::filesystem::path& path, std::size_t line) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": invalid number '" +
                      std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<SpectrumRow> read_spectrum_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spectrum file " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw ConfigError(path.string() + ": empty spectrum file");
  }
  ++line_no;
  std::string_view header = trim(line);
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (header != kHeader) {
    throw ConfigError(path.string() + ":1: expected header '" + std::string(kHeader) + "'");
  }

  std::vector<SpectrumRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto c1 = body.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
    if (c2 == std::string_view::npos || body.find(',', c2 + 1) != std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 3 comma-separated fields");
    }
    SpectrumRow row;
    row.wavelength_nm = parse_field(body.substr(0, c1), path, line_no);
    row.irradiance_w_m2_nm = parse_field(body.substr(c1 + 1, c2 - c1 - 1), path, line_no);
    row.transmittance = parse_field(body.substr(c2 + 1), path, line_no);
    if (!rows.empty() && !(row.wavelength_nm > rows.back().wavelength_nm)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": wavelengths must be strictly increasing");
    }
    rows.push_back(row);
  }
  if (rows.size() < 2) {
    throw ConfigError(path.string() + ": spectrum needs at least 2 rows");
  }
  return rows;
}

}  // namespace dtof
