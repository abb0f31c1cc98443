#include "dtof/sipm_monte_carlo.hpp"

#include "check.hpp"
#include "dtof/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

namespace dtof {

namespace {

struct Resolved {
  double step_s;
  double warmup_s;
};

Resolved resolve(const SipmMcConfig& mc, const SipmParams& params) {
  return {mc.time_step_s.value_or(params.dead_time_s / 60.0),
          mc.warmup_s.value_or(10.0 * params.dead_time_s)};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

void validate(const SipmMcConfig& mc, const SipmParams& params) {
  const Resolved r = resolve(mc, params);
  detail::require(mc.n_trials >= 1, "monte_carlo.n_trials", ">= 1",
                  static_cast<double>(mc.n_trials));
  detail::require(r.step_s > 0 && r.step_s <= params.dead_time_s / 10.0 * (1 + 1e-12),
                  "monte_carlo.time_step", "in (0, dead_time / 10]", r.step_s);
  detail::require(r.warmup_s >= 3.0 * params.dead_time_s * (1 - 1e-12), "monte_carlo.warmup",
                  ">= 3 dead times", r.warmup_s);
  detail::require(mc.background_windows >= 2, "monte_carlo.background_windows", ">= 2",
                  mc.background_windows);
}

SipmMcResult monte_carlo_snr(const SipmParams& params, double p_r, double p_rs,
                             double pulse_fwhm_s, double wavelength_m, double bandwidth_hz,
                             const SipmMcConfig& mc) {
  validate(mc, params);
  const Resolved r = resolve(mc, params);
  const double dt = r.step_s;
  const double hv = photon_energy(wavelength_m);
  const std::int64_t n_pixels = params.n_pixels;

  const std::int64_t dead_steps = std::max<std::int64_t>(1, std::llround(params.dead_time_s / dt));
  const std::int64_t window = std::max<std::int64_t>(1, std::llround(1.0 / (bandwidth_hz * dt)));
  const auto warmup_steps = static_cast<std::int64_t>(std::ceil(r.warmup_s / dt - 1e-9));
  const int n_bg = mc.background_windows;

  // Per-pixel detection mean per incident photon, consistent with the
  // analytic fired-count model.
  const double per_photon = -log_survival_per_photon(params);
  const double bg_mean = (p_rs / hv) * per_photon * dt + params.dark_count_rate_cps * dt;
  const double p_background = -std::expm1(-bg_mean);

  // Echo photons per step over the guard + counting window.
  const double n_signal = p_r * pulse_fwhm_s / (2.0 * hv);
  std::int64_t guard = 0;
  std::vector<double> photons;
  if (mc.pulse_shape == PulseShape::rectangular) {
    photons.resize(static_cast<std::size_t>(window));
    const double rate = n_signal / pulse_fwhm_s;
    for (std::int64_t j = 0; j < window; ++j) {
      const double a = static_cast<double>(j) * dt;
      const double overlap = std::max(0.0, std::min(a + dt, pulse_fwhm_s) - a);
      photons[static_cast<std::size_t>(j)] = rate * overlap;
    }
  } else {
    const double sigma = pulse_fwhm_s / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const double total = n_signal / std::erf(std::sqrt(std::numbers::ln2));
    const double center = 0.5 * static_cast<double>(window) * dt;
    guard = static_cast<std::int64_t>(std::ceil(4.0 * sigma / dt));
    photons.resize(static_cast<std::size_t>(guard + window));
    for (std::int64_t j = 0; j < guard + window; ++j) {
      const double a = static_cast<double>(j - guard) * dt;
      photons[static_cast<std::size_t>(j)] =
          total * (normal_cdf((a + dt - center) / sigma) - normal_cdf((a - center) / sigma));
    }
  }
  std::vector<double> p_pulse(photons.size());
  for (std::size_t j = 0; j < photons.size(); ++j) {
    p_pulse[j] = -std::expm1(-(bg_mean + per_photon * photons[j]));
  }

  const auto trials = static_cast<std::size_t>(mc.n_trials);
  std::vector<std::int64_t> pulse_counts(trials);
  std::vector<std::int64_t> bg_counts(trials * static_cast<std::size_t>(n_bg));

  auto run_trial = [&](std::size_t trial) {
    std::mt19937_64 rng(trial_seed(mc.seed, trial));
    std::vector<std::int64_t> ring(static_cast<std::size_t>(dead_steps), 0);
    std::int64_t dead = 0;
    std::int64_t step = 0;
    auto advance = [&](double p) {
      auto& slot = ring[static_cast<std::size_t>(step % dead_steps)];
      dead -= slot;  // pixels fired dead_steps ago re-arm now
      const std::int64_t armed = n_pixels - dead;
      std::int64_t fired = 0;
      if (armed > 0 && p > 0.0) {
        fired = std::binomial_distribution<std::int64_t>(armed, p)(rng);
      }
      slot = fired;
      dead += fired;
      ++step;
      return fired;
    };

    for (std::int64_t j = 0; j < warmup_steps; ++j) advance(p_background);
    for (int w = 0; w < n_bg; ++w) {
      std::int64_t count = 0;
      for (std::int64_t j = 0; j < window; ++j) count += advance(p_background);
      bg_counts[trial * static_cast<std::size_t>(n_bg) + static_cast<std::size_t>(w)] = count;
    }
    for (std::int64_t j = 0; j < guard; ++j) advance(p_pulse[static_cast<std::size_t>(j)]);
    std::int64_t count = 0;
    for (std::int64_t j = 0; j < window; ++j) {
      count += advance(p_pulse[static_cast<std::size_t>(guard + j)]);
    }
    pulse_counts[trial] = count;
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(mc.threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < trials; t += workers) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Sequential reduction in trial order.
  auto moments = [](const std::vector<std::int64_t>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (auto c : v) mean += static_cast<double>(c);
    mean /= n;
    double m2 = 0.0;
    double m4 = 0.0;
    for (auto c : v) {
      const double d = static_cast<double>(c) - mean;
      m2 += d * d;
      m4 += d * d * d * d;
    }
    const double var = v.size() > 1 ? m2 / (n - 1.0) : 0.0;
    return std::array<double, 3>{mean, var, m4 / n};
  };
  const auto [bg_mean_count, bg_var, bg_m4] = moments(bg_counts);
  const auto [pulse_mean, pulse_var, pulse_m4] = moments(pulse_counts);
  (void)pulse_m4;

  SipmMcResult out;
  const double n_bg_total = static_cast<double>(bg_counts.size());
  out.background_mean = bg_mean_count;
  out.signal_mean = pulse_mean - bg_mean_count;
  out.signal_std_error =
      std::sqrt(pulse_var / static_cast<double>(trials) + bg_var / n_bg_total);
  out.noise_std = std::sqrt(bg_var);
  if (out.noise_std > 0.0) {
    out.noise_std_error =
        std::sqrt(std::max(bg_m4 - bg_var * bg_var, 0.0) / n_bg_total) / (2.0 * out.noise_std);
    out.snr = out.signal_mean / out.noise_std;
    const double rel_signal = out.signal_std_error / out.noise_std;
    const double rel_noise = out.snr * out.noise_std_error / out.noise_std;
    out.std_error = std::sqrt(rel_signal * rel_signal + rel_noise * rel_noise);
  } else {
    out.snr = out.signal_mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    out.std_error = 0.0;
  }
  return out;
}

}  // namespace dtof
