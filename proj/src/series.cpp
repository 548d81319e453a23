#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ehpc/evaluation.hpp"

namespace ehpc {

EvaluationResult bernoulli_reward(const StationaryPolicy& policy,
                                  const RewardFunction& rw, double c, double p,
                                  double tol) {
  if (!(c > 0.0)) throw std::domain_error("capacity must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  if (!(tol > 0.0)) throw std::domain_error("series tolerance must be > 0");

  // Maximin policies empty the battery in exactly M(omega(c)) draws without
  // an arrival; later terms vanish.
  long max_terms = -1;
  if (policy.is_maximin()) {
    max_terms = m_steps(*policy.reward(), policy.scale(), policy(c));
  }

  const double top = rw.value(c);
  double level = c;
  double weight = p;          // p (1-p)^{i-1}
  double tail = top;          // (1-p)^{i-1} r(c) bounds the remaining sum
  double sum = 0.0;
  for (long i = 1; max_terms < 0 || i <= max_terms; ++i) {
    const double u = policy(level);
    sum += weight * rw.value(u);
    level = std::max(level - u, 0.0);
    weight *= 1.0 - p;
    tail *= 1.0 - p;
    if (level == 0.0) {
      tail = 0.0;
      break;
    }
    if (tail < tol) break;
  }
  if (max_terms >= 0) tail = 0.0;

  EvaluationResult result;
  result.value = sum;
  result.method = EvaluationMethod::bernoulli_series;
  result.residual = tail;
  return result;
}

DerivativeCheck bernoulli_derivative_check(const RewardFunction& rw, double p,
                                           double c, double h) {
  if (!(h > 0.0) || !(c > h)) {
    throw std::domain_error("derivative check needs 0 < h < c");
  }
  const auto omega = StationaryPolicy::maximin_for(rw, p);
  DerivativeCheck check;
  check.analytic = p * rw.derivative(omega(c));

  for (int k = 1;; ++k) {
    const double kink = kink_points(rw, p, k).back().x;
    if (std::abs(kink - c) <= h) {
      std::ostringstream msg;
      msg << "c = " << c << " lies within h of kink E_" << k << " at "
          << kink << "; comparison skipped";
      check.skipped = true;
      check.note = msg.str();
      return check;
    }
    if (kink > c + h) break;
  }

  const double up = bernoulli_reward(omega, rw, c + h, p).value;
  const double down = bernoulli_reward(omega, rw, c - h, p).value;
  check.finite_difference = (up - down) / (2.0 * h);
  return check;
}

}  // namespace ehpc
