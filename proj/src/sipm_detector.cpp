#include "dtof/sipm_detector.hpp"

#include "check.hpp"
#include "dtof/constants.hpp"

#include <limits>

namespace dtof {

void validate(const SipmParams& p) {
  detail::require(p.n_pixels >= 1, "sipm.n_pixels", ">= 1", static_cast<double>(p.n_pixels));
  detail::require(p.pde > 0 && p.pde <= 1, "sipm.pde", "in (0, 1]", p.pde);
  detail::require(p.dead_time_s > 0, "sipm.dead_time", "> 0", p.dead_time_s);
  detail::require(p.dark_count_rate_cps >= 0, "sipm.dark_count_rate_cps", ">= 0",
                  p.dark_count_rate_cps);
}

bool dark_occupancy_warning(const SipmParams& p) {
  return static_cast<double>(p.n_pixels) * p.dark_count_rate_cps * p.dead_time_s >= 1e-2;
}

PhotonCounts photon_counts(const SipmParams& params, double p_r, double p_rs,
                           double pulse_fwhm_s, double wavelength_m) {
  const double hv = photon_energy(wavelength_m);
  return {p_rs * params.dead_time_s / hv, p_r * pulse_fwhm_s / (2.0 * hv)};
}

double fired_std(const SipmParams& params, double n_photon) {
  const double unfired = std::exp(n_photon * log_survival_per_photon(params));
  return std::sqrt(fired_count(params, n_photon) * unfired);
}

double background_occupancy(const SipmParams& params, const PhotonCounts& counts) {
  return fired_count(params, counts.n_b_photon);
}

DarkOccupancy dark_occupancy(const SipmParams& params) {
  const double mean =
      static_cast<double>(params.n_pixels) * params.dark_count_rate_cps * params.dead_time_s;
  return {mean, std::sqrt(mean)};
}

double signal_fired(const SipmParams& params, const PhotonCounts& counts, double n_b,
                    double n_d) {
  const double n = static_cast<double>(params.n_pixels);
  if (n_b + n_d > n) {
    throw SaturationError("sipm: background and dark occupancy (" +
                          detail::format_number(n_b + n_d) + ") exceed the " +
                          std::to_string(params.n_pixels) + "-pixel array");
  }
  return -(n - n_b - n_d) * std::expm1(counts.n_s_photon * log_survival_per_photon(params));
}

SipmSnr trigger_snr_analytic(const SipmParams& params, const PhotonCounts& counts) {
  const double n_b = background_occupancy(params, counts);
  const DarkOccupancy dark = dark_occupancy(params);
  const double signal = signal_fired(params, counts, n_b, dark.mean);

  SipmSnr out;
  const double free_pixels = static_cast<double>(params.n_pixels) - n_b - dark.mean;
  out.saturated = free_pixels > 0 && signal >= kSaturationFraction * free_pixels;

  const double unfired = std::exp(counts.n_b_photon * log_survival_per_photon(params));
  const double variance = n_b * unfired + dark.mean;
  if (signal == 0.0) return out;
  if (variance <= 0.0) {
    out.value = std::numeric_limits<double>::infinity();
    out.noiseless = true;
    return out;
  }
  out.value = signal / std::sqrt(variance);
  return out;
}

SipmSnr trigger_snr_approx(const SipmParams& params, double p_r, double p_rs,
                           double pulse_fwhm_s, double wavelength_m) {
  SipmSnr out;
  if (p_r == 0.0) return out;
  if (p_rs <= 0.0) {
    out.value = std::numeric_limits<double>::infinity();
    out.noiseless = true;
    return out;
  }
  const double hv = photon_energy(wavelength_m);
  out.value = p_r * pulse_fwhm_s / (2.0 * std::sqrt(hv * p_rs * params.dead_time_s)) *
              std::sqrt(params.pde);
  return out;
}

}  // namespace dtof
