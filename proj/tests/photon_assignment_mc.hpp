#pragma once

// Brute-force simulation of the photon-assignment process behind the fired
// pixel mean and variance formulas: a Poisson number of photons, each assigned
// to a uniformly chosen pixel and detected with probability
// N (1 - exp(-pde / N)); a pixel fires when it detects at least one photon.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace photon_assignment {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

inline Moments simulate(std::int64_t n_pixels, double pde, double mean_photons,
                        std::int64_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::int64_t> photons(mean_photons);
  std::uniform_int_distribution<std::int64_t> pixel(0, n_pixels - 1);
  const double n = static_cast<double>(n_pixels);
  std::bernoulli_distribution detected(-n * std::expm1(-pde / n));

  std::vector<char> fired(static_cast<std::size_t>(n_pixels));
  std::vector<double> counts(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    std::fill(fired.begin(), fired.end(), 0);
    const std::int64_t k = photons(rng);
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < k; ++i) {
      const auto p = static_cast<std::size_t>(pixel(rng));
      if (detected(rng) && !fired[p]) {
        fired[p] = 1;
        ++count;
      }
    }
    counts[static_cast<std::size_t>(t)] = static_cast<double>(count);
  }

  Moments m;
  const double tn = static_cast<double>(trials);
  for (double c : counts) m.mean += c;
  m.mean /= tn;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double c : counts) {
    const double d = c - m.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m.variance = m2 / (tn - 1.0);
  m.mean_se = std::sqrt(m.variance / tn);
  m.variance_se = std::sqrt(std::max(m4 / tn - (m2 / tn) * (m2 / tn), 0.0) / tn);
  return m;
}

}  // namespace photon_assignment
