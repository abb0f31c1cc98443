#pragma once

#include <cstdint>

namespace dtof {

/// Threshold-trigger policy of the time-to-digital converter.
struct TdcPolicy {
  double tnr = 5.0;                    // threshold / sigma(noise)
  double window_s = 4e-6;              // detection window
  double bandwidth_hz = 167e6;         // effective bandwidth B_w
  double limit_detection_prob = 0.5;   // P_d at the sensitivity limit

  bool operator==(const TdcPolicy&) const = default;
};

void validate(const TdcPolicy& policy);

/// Number of threshold comparisons per window, round(window * B_w), at least 1.
std::int64_t comparison_count(const TdcPolicy& policy);

/// Probability that Gaussian noise alone crosses a threshold of `tnr` sigma:
/// 1/2 - 1/2 erf(tnr / sqrt 2). Evaluated as erfc/2, which keeps full relative
/// precision in the tail (glibc erfc is accurate to a few ulp).
double false_alarm_prob(double tnr);

/// Probability that the window is triggered by the pulse rather than noise,
/// with the pulse at the end of the window:
///   (1 - P_f)^(M-1) P_d / (1 - (1 - P_f)^(M-1) (1 - P_d)).
double correct_detection_prob(const TdcPolicy& policy, double detection_prob);

/// Weakest detectable peak, tnr * sigma.
inline double min_detectable_signal(const TdcPolicy& policy, double noise_sigma) {
  return policy.tnr * noise_sigma;
}

}  // namespace dtof
