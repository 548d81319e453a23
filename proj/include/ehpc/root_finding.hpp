#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ehpc {

enum class InversionMethod {
  bisection,
  /// Illinois false-position steps, falling back to bisection whenever a
  /// step fails to halve the bracket.
  safeguarded_secant,
};

struct InversionResult {
  double x = 0.0;
  double residual = 0.0;  // |f(x) - target|
  int iterations = 0;
};

/// Solves f(x) = target for a nondecreasing f on the bracket [lo, hi] with
/// f(lo) <= target <= f(hi). Stops once |f(x) - target| <= tol or the bracket
/// has collapsed to a few ulps, returning the endpoint with the smaller
/// residual in the latter case.
template <typename F>
InversionResult invert_increasing(F&& f, double target, double lo, double hi,
                                  double tol,
                                  InversionMethod method =
                                      InversionMethod::safeguarded_secant,
                                  int max_iterations = 400) {
  if (!(lo <= hi)) throw std::invalid_argument("inverted bracket");
  double f_lo = f(lo) - target;
  double f_hi = f(hi) - target;
  if (f_lo > tol || f_hi < -tol) {
    throw std::domain_error("target is not bracketed");
  }
  InversionResult best;
  auto consider = [&](double x, double fx) {
    if (best.iterations == 0 || std::abs(fx) < best.residual) {
      best.x = x;
      best.residual = std::abs(fx);
    }
  };
  consider(lo, f_lo);
  best.iterations = 1;
  consider(hi, f_hi);
  if (best.residual <= tol) return best;

  int retained_side = 0;  // -1: lo kept twice in a row, +1: hi kept twice
  bool force_bisection = method == InversionMethod::bisection;
  double previous_width = hi - lo;
  for (int it = 0; it < max_iterations; ++it) {
    best.iterations = it + 1;
    const double width = hi - lo;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::abs(hi))) {
      break;
    }
    double mid = lo + 0.5 * width;
    if (!force_bisection && f_hi != f_lo) {
      const double candidate = hi - f_hi * width / (f_hi - f_lo);
      if (candidate > lo && candidate < hi) mid = candidate;
    }
    const double f_mid = f(mid) - target;
    consider(mid, f_mid);
    if (std::abs(f_mid) <= tol) break;
    if (f_mid < 0.0) {
      lo = mid;
      f_lo = f_mid;
      if (retained_side == 1) f_hi *= 0.5;
      retained_side = 1;
    } else {
      hi = mid;
      f_hi = f_mid;
      if (retained_side == -1) f_lo *= 0.5;
      retained_side = -1;
    }
    if (method == InversionMethod::safeguarded_secant) {
      const double new_width = hi - lo;
      force_bisection = new_width > 0.5 * previous_width;
      previous_width = new_width;
    }
  }
  return best;
}

}  // namespace ehpc
