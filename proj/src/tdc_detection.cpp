#include "dtof/tdc_detection.hpp"

#include "check.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dtof {

void validate(const TdcPolicy& policy) {
  detail::require(policy.tnr > 0, "tdc.tnr", "> 0", policy.tnr);
  detail::require(policy.window_s > 0, "tdc.window", "> 0", policy.window_s);
  detail::require(policy.bandwidth_hz > 0, "bandwidth", "> 0", policy.bandwidth_hz);
  detail::require(policy.limit_detection_prob > 0 && policy.limit_detection_prob <= 1,
                  "tdc.limit_detection_prob", "in (0, 1]", policy.limit_detection_prob);
}

std::int64_t comparison_count(const TdcPolicy& policy) {
  const auto m = static_cast<std::int64_t>(std::llround(policy.window_s * policy.bandwidth_hz));
  return std::max<std::int64_t>(m, 1);
}

double false_alarm_prob(double tnr) {
  return 0.5 * std::erfc(tnr / std::numbers::sqrt2);
}

double correct_detection_prob(const TdcPolicy& policy, double detection_prob) {
  const double pf = false_alarm_prob(policy.tnr);
  const auto m = comparison_count(policy);
  // (1 - P_f)^(M-1) and its complement without cancellation for tiny P_f.
  const double log_quiet = static_cast<double>(m - 1) * std::log1p(-pf);
  const double quiet = std::exp(log_quiet);
  const double hit = quiet * detection_prob;
  const double denom = hit - std::expm1(log_quiet);
  if (denom <= 0.0) return 0.0;
  return hit / denom;
}

}  // namespace dtof
