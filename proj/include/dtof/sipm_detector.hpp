#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <type_traits>

namespace dtof {

/// SiPM as an array of SPAD pixels. The photon detection efficiency is the
/// composed product of quantum efficiency, avalanche trigger probability and
/// fill factor; the factors are not modelled separately.
struct SipmParams {
  std::int64_t n_pixels = 400;
  double pde = 0.22;
  double dead_time_s = 6e-9;
  double dark_count_rate_cps = 2007.0;  // per pixel

  bool operator==(const SipmParams&) const = default;
};

void validate(const SipmParams& params);

/// True when N_pixel * DCR * tau_dead reaches 1e-2, where dark occupancy stops
/// being negligible.
bool dark_occupancy_warning(const SipmParams& params);

/// Photons per dead time (background) and per echo (signal).
struct PhotonCounts {
  double n_b_photon = 0.0;  // P_rs tau_dead / (h nu)
  double n_s_photon = 0.0;  // P_r B_pulse / (2 h nu)
};

PhotonCounts photon_counts(const SipmParams& params, double p_r, double p_rs,
                           double pulse_fwhm_s, double wavelength_m);

/// exp(-pde / N_pixel) - 1, the per-photon log non-fire factor. Always < 0.
inline double log_survival_per_photon(const SipmParams& params) {
  return std::expm1(-params.pde / static_cast<double>(params.n_pixels));
}

/// Expected fired pixels N_pixel (1 - exp(n (exp(-pde/N) - 1))). Works for a
/// scalar photon count or an Eigen array of them.
template <typename T>
auto fired_count(const SipmParams& params, const T& n_photon) {
  using std::exp;
  using std::expm1;
  const double n = static_cast<double>(params.n_pixels);
  const double k = log_survival_per_photon(params);
  if constexpr (std::is_arithmetic_v<T>) {
    return -n * expm1(n_photon * k);
  } else {
    return (-n * (n_photon * k).expm1()).eval();
  }
}

/// Binomial standard deviation of the fired count: sqrt(N_fired exp(n k)).
double fired_std(const SipmParams& params, double n_photon);

/// Pixels held by continuous background light during one dead time.
double background_occupancy(const SipmParams& params, const PhotonCounts& counts);

struct DarkOccupancy {
  double mean = 0.0;   // N_pixel DCR tau_dead
  double sigma = 0.0;  // Poisson: sqrt(mean)
};

DarkOccupancy dark_occupancy(const SipmParams& params);

/// Pixels fired by the echo among those not held by background or dark
/// counts. Throws SaturationError when n_b + n_d exceeds the array.
double signal_fired(const SipmParams& params, const PhotonCounts& counts, double n_b,
                    double n_d);

/// Fraction of free pixels fired by the echo above which the response is
/// flagged as saturated.
inline constexpr double kSaturationFraction = 0.9;

struct SipmSnr {
  double value = 0.0;
  bool noiseless = false;  // zero noise: value is +infinity
  bool saturated = false;  // echo fires >= kSaturationFraction of the free pixels
};

/// N_s / sqrt(sigma^2(N_b) + sigma_d^2).
SipmSnr trigger_snr_analytic(const SipmParams& params, const PhotonCounts& counts);

/// Photon-limited approximation P_r B_pulse / (2 sqrt(h nu P_rs tau)) sqrt(pde).
SipmSnr trigger_snr_approx(const SipmParams& params, double p_r, double p_rs,
                           double pulse_fwhm_s, double wavelength_m);

}  // namespace dtof
