#include "dtof/apd_detector.hpp"

#include "check.hpp"
#include "dtof/constants.hpp"
#include "dtof/numerics.hpp"

#include <limits>

namespace dtof {

using constants::boltzmann;
using constants::elementary_charge;
using detail::require;

void validate(const ApdParams& p) {
  require(p.gain >= 1 && std::isfinite(p.gain), "apd.gain", ">= 1", p.gain);
  require(p.quantum_efficiency > 0 && p.quantum_efficiency <= 1, "apd.quantum_efficiency",
          "in (0, 1]", p.quantum_efficiency);
  require(p.excess_noise_index >= 0, "apd.excess_noise_index", ">= 0", p.excess_noise_index);
  require(p.electron_ionization_rate >= 0 && p.electron_ionization_rate <= 1,
          "apd.electron_ionization_rate", "in [0, 1]", p.electron_ionization_rate);
  require(p.surface_dark_current_a >= 0, "apd.surface_dark_current", ">= 0",
          p.surface_dark_current_a);
  require(p.bulk_dark_current_a >= 0, "apd.bulk_dark_current", ">= 0", p.bulk_dark_current_a);
  require(p.load_resistance_ohm > 0, "apd.load_resistance_ohm", "> 0", p.load_resistance_ohm);
  require(p.temperature_k > 0, "apd.temperature_k", "> 0", p.temperature_k);
  require(p.amplifier_noise_a >= 0, "apd.amplifier_noise", ">= 0", p.amplifier_noise_a);
}

ApdParams photon_limited(ApdParams params) {
  params.surface_dark_current_a = 0.0;
  params.bulk_dark_current_a = 0.0;
  params.amplifier_noise_a = 0.0;
  params.load_resistance_ohm = std::numeric_limits<double>::infinity();
  return params;
}

double responsivity(double wavelength_m, double quantum_efficiency) {
  return elementary_charge * quantum_efficiency * wavelength_m /
         (constants::planck * constants::speed_of_light);
}

double signal_current(const ApdParams& params, double wavelength_m, double p_r) {
  return responsivity(wavelength_m, params.quantum_efficiency) * params.gain * p_r;
}

double excess_noise_factor(const ApdParams& params) {
  const double m = params.gain;
  if (params.excess_noise_mode == ExcessNoiseMode::power_law) {
    return std::pow(m, params.excess_noise_index);
  }
  const double k = params.electron_ionization_rate;
  return k * m + (1.0 - k) * (2.0 - 1.0 / m);
}

NoiseBudget noise_sigma(const ApdParams& params, double wavelength_m, double p_rs, double p_r,
                        double bandwidth_hz) {
  const double k_pd = responsivity(wavelength_m, params.quantum_efficiency);
  const double multiplied = params.gain * params.gain * excess_noise_factor(params);
  const double two_e_b = 2.0 * elementary_charge * bandwidth_hz;

  NoiseBudget n;
  n.sigma_signal_a = std::sqrt(two_e_b * k_pd * p_r * multiplied);
  n.sigma_background_a = std::sqrt(two_e_b * k_pd * p_rs * multiplied);
  n.sigma_dark_a = std::sqrt(two_e_b * (params.surface_dark_current_a +
                                        params.bulk_dark_current_a * multiplied));
  n.sigma_thermal_a =
      std::sqrt(4.0 * boltzmann * params.temperature_k * bandwidth_hz / params.load_resistance_ohm);
  n.sigma_amplifier_a = params.amplifier_noise_a;
  n.total_a = std::sqrt(n.sigma_signal_a * n.sigma_signal_a +
                        n.sigma_background_a * n.sigma_background_a +
                        n.sigma_dark_a * n.sigma_dark_a + n.sigma_thermal_a * n.sigma_thermal_a +
                        n.sigma_amplifier_a * n.sigma_amplifier_a);
  return n;
}

double trigger_snr(const ApdParams& params, double wavelength_m, double p_r, double p_rs,
                   double bandwidth_hz) {
  const double signal = signal_current(params, wavelength_m, p_r);
  if (signal == 0.0) return 0.0;
  const double noise = noise_sigma(params, wavelength_m, p_rs, 0.0, bandwidth_hz).total_a;
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return signal / noise;
}

ReducedSnrCoefficients reduced_snr_coefficients(const ApdParams& params, double bandwidth_hz) {
  const double two_e_b = 2.0 * elementary_charge * bandwidth_hz;
  ReducedSnrCoefficients k;
  k.a = two_e_b;
  k.b = two_e_b * params.bulk_dark_current_a;
  k.c = two_e_b * params.surface_dark_current_a +
        4.0 * boltzmann * params.temperature_k * bandwidth_hz / params.load_resistance_ohm +
        params.amplifier_noise_a * params.amplifier_noise_a;
  return k;
}

double reduced_trigger_snr(const ReducedSnrCoefficients& k, double responsivity_a_w,
                           double gain, double excess_noise_index, double p_r, double p_rs) {
  const double m_pow = std::pow(gain, 2.0 + excess_noise_index);
  return responsivity_a_w * gain * p_r /
         std::sqrt(k.a * responsivity_a_w * p_rs * m_pow + k.b * m_pow + k.c);
}

GainOptimum optimize_gain(const ApdParams& params, double wavelength_m, double p_r, double p_rs,
                          double bandwidth_hz, GainBounds bounds) {
  if (!(bounds.lo >= 1.0) || !(bounds.lo < bounds.hi)) {
    throw ConfigError("gain bounds: require 1 <= lo < hi (got [" +
                      detail::format_number(bounds.lo) + ", " +
                      detail::format_number(bounds.hi) + "])");
  }
  auto snr_at = [&](double gain) {
    ApdParams p = params;
    p.gain = gain;
    return trigger_snr(p, wavelength_m, p_r, p_rs, bandwidth_hz);
  };

  constexpr int kScan = 64;
  const Eigen::ArrayXd grid = numerics::log_grid(bounds.lo, bounds.hi, kScan);
  int best = 0;
  double best_value = snr_at(grid[0]);
  for (int i = 1; i < kScan; ++i) {
    const double v = snr_at(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = grid[std::max(best - 1, 0)];
  const double hi = grid[std::min(best + 1, kScan - 1)];
  auto opt = numerics::golden_section_maximize(snr_at, lo, hi, 1e-6);

  GainOptimum out{opt.argument, opt.value, false};
  // The bracket can only collapse onto a bound when the maximum sits there.
  for (double edge : {bounds.lo, bounds.hi}) {
    const double v = snr_at(edge);
    if (v >= out.snr) {
      out = {edge, v, true};
    }
  }
  if (std::abs(out.gain - bounds.lo) <= 1e-6 * bounds.lo ||
      std::abs(out.gain - bounds.hi) <= 1e-6 * bounds.hi) {
    out.at_bound = true;
  }
  return out;
}

}  // namespace dtof
