#pragma once

#include "dtof/sipm_detector.hpp"

#include <cstdint>
#include <optional>

namespace dtof {

enum class PulseShape { rectangular, gaussian };

/// Settings of the time-domain SiPM simulation. Unset optional fields take
/// defaults derived from the dead time (step tau/60, warm-up 10 tau).
struct SipmMcConfig {
  std::int64_t n_trials = 1000;
  std::optional<double> time_step_s;
  PulseShape pulse_shape = PulseShape::rectangular;
  std::uint64_t seed = 20240501;
  std::optional<double> warmup_s;
  int background_windows = 16;  // counting periods sampled per trial for the noise
  unsigned threads = 1;

  bool operator==(const SipmMcConfig&) const = default;
};

void validate(const SipmMcConfig& mc, const SipmParams& params);

struct SipmMcResult {
  double snr = 0.0;
  double std_error = 0.0;
  double signal_mean = 0.0;        // echo-window count minus background mean
  double signal_std_error = 0.0;
  double noise_std = 0.0;          // std of background-only window counts
  double noise_std_error = 0.0;
  double background_mean = 0.0;
};

/// Time-domain simulation of the pixel array with non-paralysable dead time.
///
/// Every pixel is armed or dead. Per time step each armed pixel fires with
/// probability 1 - exp(-mu), where mu sums background photons, the echo
/// envelope and dark counts (photons are spread uniformly over the pixels and
/// each pixel's detection mean per photon is 1 - exp(-pde / N_pixel)). A fired
/// pixel stays dead for round(tau_dead / step) steps. Pixels are exchangeable,
/// so the state is the number of pixels fired in each of the last dead-time
/// steps and firings per step are drawn binomially.
///
/// Counting period = 1 / B_w. Noise is the standard deviation of fired counts
/// per period in steady-state background; signal is the mean count in the
/// period aligned with the echo minus the background mean. The echo delivers
/// P_r B_pulse / (2 h nu) photons within its half-maximum width.
///
/// Trial i draws from a generator seeded by (seed, i), so results do not depend
/// on the thread count.
SipmMcResult monte_carlo_snr(const SipmParams& params, double p_r, double p_rs,
                             double pulse_fwhm_s, double wavelength_m, double bandwidth_hz,
                             const SipmMcConfig& mc);

/// SplitMix64 finaliser, used to derive per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master ^ splitmix64(trial));
}

}  // namespace dtof
