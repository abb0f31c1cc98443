#pragma once

#include <cmath>

namespace dtof {

enum class ExcessNoiseMode { power_law, ionization };

/// Linear-mode avalanche photodiode. Gain is a direct input.
struct ApdParams {
  double gain = 80.0;
  double quantum_efficiency = 0.70;
  double excess_noise_index = 0.3;        // F_m ~ M^x
  double electron_ionization_rate = 0.0;  // k_e, ionization mode only
  double surface_dark_current_a = 0.1e-9;
  double bulk_dark_current_a = 0.1e-9;
  double load_resistance_ohm = 10e3;
  double temperature_k = 300.0;
  double amplifier_noise_a = 0.0;
  ExcessNoiseMode excess_noise_mode = ExcessNoiseMode::power_law;

  bool operator==(const ApdParams&) const = default;
};

void validate(const ApdParams& params);

/// Copy with every electrical noise source removed (dark currents, thermal,
/// amplifier), leaving only optical shot noise. Thermal noise is removed by an
/// infinite load resistance.
ApdParams photon_limited(ApdParams params);

/// RMS noise currents, amperes.
struct NoiseBudget {
  double sigma_signal_a = 0.0;
  double sigma_background_a = 0.0;
  double sigma_dark_a = 0.0;
  double sigma_thermal_a = 0.0;
  double sigma_amplifier_a = 0.0;
  double total_a = 0.0;
};

/// K_PD = e eta lambda / (h c), A/W before multiplication.
double responsivity(double wavelength_m, double quantum_efficiency);

/// i_s = K_PD M P_r.
double signal_current(const ApdParams& params, double wavelength_m, double p_r);

/// F_m: M^x (power law) or k M + (1 - k)(2 - 1/M) (ionization).
double excess_noise_factor(const ApdParams& params);

/// Independent shot, dark, thermal and amplifier terms combined in quadrature.
NoiseBudget noise_sigma(const ApdParams& params, double wavelength_m, double p_rs, double p_r,
                        double bandwidth_hz);

/// Peak signal current over the no-echo noise.
double trigger_snr(const ApdParams& params, double wavelength_m, double p_r, double p_rs,
                   double bandwidth_hz);

/// Constants of the reduced form
///   SNR = K M P_r / sqrt(a K P_rs M^(2+x) + b M^(2+x) + c)
/// valid in power-law mode.
struct ReducedSnrCoefficients {
  double a = 0.0;  // 2 e B_w
  double b = 0.0;  // 2 e i_db B_w
  double c = 0.0;  // 2 e i_ds B_w + 4 k T B_w / R_l + sigma_c^2
};

ReducedSnrCoefficients reduced_snr_coefficients(const ApdParams& params, double bandwidth_hz);

double reduced_trigger_snr(const ReducedSnrCoefficients& k, double responsivity_a_w,
                           double gain, double excess_noise_index, double p_r, double p_rs);

struct GainBounds {
  double lo = 1.0;
  double hi = 1000.0;
};

struct GainOptimum {
  double gain = 0.0;
  double snr = 0.0;
  bool at_bound = false;
};

/// Gain maximising the trigger SNR: 64-point log-spaced scan to bracket the
/// global maximum, then golden-section refinement to 1e-6 relative width.
GainOptimum optimize_gain(const ApdParams& params, double wavelength_m, double p_r, double p_rs,
                          double bandwidth_hz, GainBounds bounds = {});

}  // namespace dtof
