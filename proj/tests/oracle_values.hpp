#pragma once

// Reference values from tests/oracle/link_budget_oracle.py (mpmath, 40 digits),
// Baseline parameters unless noted.
namespace oracle {

inline constexpr double transmittance_alpha_2_0203e_4_r100 = 0.97999971317121103;
inline constexpr double aperture_constant = 0.0019634954084936208;
inline constexpr double aperture_cosine_60 = 0.00098174770424681039;
inline constexpr double echo_power_r100 = 1.9464306750000000e-7;
inline constexpr double background_power = 2.5099212581122909e-8;
inline constexpr double fov_half_angle = 0.0033333209877366249;

inline constexpr double false_alarm_tnr5 = 2.8665157187919391e-7;
inline constexpr double false_alarm_tnr1 = 0.15865525393145705;
inline constexpr double p_correct_tnr5_m400 = 0.99977129125060379;

inline constexpr double responsivity = 0.51095220843107256;
inline constexpr double signal_current_r100 = 7.956264415593866e-6;
inline constexpr double excess_noise_80_03 = 3.7232911332721388;
inline constexpr double thermal_sigma = 1.6633762641086352e-8;
inline constexpr double apd_sigma_no_echo = 1.2945060113262815e-7;
inline constexpr double apd_snr_r100 = 61.461780370122064;

inline constexpr double photon_energy = 2.1949677979546173e-19;
inline constexpr double n_b_photon = 686.09332504590633;
inline constexpr double n_b = 125.70148862688591;
inline constexpr double n_b_variance = 86.199328019348091;
inline constexpr double n_d = 0.0048168;
inline constexpr double sigma_d = 0.069403169956422019;
inline constexpr double fired_400_022_100 = 21.400215589837781;
inline constexpr double fired_std_400_022_100 = 4.5005880195379959;
inline constexpr double sipm_snr_r100 = 22.700856590737628;
inline constexpr double sipm_snr_r150 = 14.121942699320659;
inline constexpr double sipm_snr_approx_r150 = 21.172359866927034;

inline constexpr double rmax_apd = 350.60456463121545;
inline constexpr double rmax_sipm = 280.87147101504783;
inline constexpr double rmax_sipm_approx = 308.66749002959747;

}  // namespace oracle
