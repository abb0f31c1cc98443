#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace dtof::numerics {

/// Trapezoidal rule on an arbitrary (non-uniform) grid.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar trapezoid(const Eigen::ArrayBase<DerivedX>& x,
                                    const Eigen::ArrayBase<DerivedY>& y) {
  const Eigen::Index n = x.size();
  if (n < 2) return typename DerivedX::Scalar(0);
  return typename DerivedX::Scalar(0.5) *
         ((x.tail(n - 1) - x.head(n - 1)) * (y.tail(n - 1) + y.head(n - 1))).sum();
}

template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> linear_grid(Scalar lo, Scalar hi, Eigen::Index n) {
  return Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(n, lo, hi);
}

template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> log_grid(Scalar lo, Scalar hi, Eigen::Index n) {
  using std::log;
  return Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(n, log(lo), log(hi)).exp();
}

template <typename Scalar>
struct ScalarOptimum {
  Scalar argument;
  Scalar value;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than rel_tol * |midpoint| (or abs_tol).
template <typename Scalar, typename F>
ScalarOptimum<Scalar> golden_section_maximize(F&& f, Scalar lo, Scalar hi, Scalar rel_tol,
                                              Scalar abs_tol = Scalar(0),
                                              int max_iterations = 500) {
  using std::abs;
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar c = hi - inv_phi * (hi - lo);
  Scalar d = lo + inv_phi * (hi - lo);
  Scalar fc = f(c);
  Scalar fd = f(d);
  for (int i = 0; i < max_iterations; ++i) {
    const Scalar width = hi - lo;
    if (width <= rel_tol * abs(Scalar(0.5) * (lo + hi)) || width <= abs_tol) break;
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const Scalar x = Scalar(0.5) * (lo + hi);
  return {x, f(x)};
}

/// Bisection for g(x) = 0 on [lo, hi] where g(lo) > 0 >= g(hi).
/// Terminates when the bracket is narrower than width_tol and |g(mid)| <= value_tol.
template <typename Scalar, typename G>
Scalar bisect_decreasing(G&& g, Scalar lo, Scalar hi, Scalar width_tol, Scalar value_tol,
                         int max_iterations = 400) {
  using std::abs;
  Scalar mid = Scalar(0.5) * (lo + hi);
  for (int i = 0; i < max_iterations; ++i) {
    mid = Scalar(0.5) * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // bracket at machine precision
    const Scalar gm = g(mid);
    if ((hi - lo) < width_tol && abs(gm) <= value_tol) break;
    if (gm > Scalar(0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

}  // namespace dtof::numerics
