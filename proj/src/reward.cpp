#include "ehpc/reward.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ehpc {
namespace {

// Relative slack when deciding whether s*r'(x) exceeds r'(0).
constexpr double kDerivativeSlack = 1e-12;
// Log ratios this close to an integer are treated as that integer.
constexpr double kIntegerSnap = 1e-12;

void require_scale(double s) {
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw std::domain_error("scale factor s must be finite and > 1");
  }
}

void require_level(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("energy level must be finite and >= 0");
  }
}

double snapped_log_ratio(const RewardFunction& rw, double s, double x) {
  require_scale(s);
  require_level(x);
  if (x == 0.0) return 0.0;
  double ratio =
      std::log(rw.derivative_at_zero() / rw.derivative(x)) / std::log(s);
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= kIntegerSnap * std::max(1.0, ratio)) {
    ratio = nearest;
  }
  return std::max(ratio, 0.0);
}

// kappa_scale(x) without domain checks; clamps tiny negatives produced by
// rounding at x == tau.
double kappa_unchecked(const RewardFunction& rw, double scale, double x) {
  switch (rw.kind()) {
    case RewardFunction::Kind::awgn: {
      const double g = rw.gamma();
      return std::max(((1.0 + g * x) / scale - 1.0) / g, 0.0);
    }
    case RewardFunction::Kind::sqrt:
      return std::max((1.0 + x) / (scale * scale) - 1.0, 0.0);
    case RewardFunction::Kind::custom: {
      const double y =
          std::min(scale * rw.derivative(x), rw.derivative_at_zero());
      return std::max(rw.derivative_inverse(y), 0.0);
    }
  }
  return 0.0;
}

}  // namespace

RewardFunction RewardFunction::awgn(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("awgn channel coefficient must be > 0");
  }
  RewardFunction rw;
  rw.kind_ = Kind::awgn;
  rw.gamma_ = gamma;
  rw.derivative_at_zero_ = gamma / 2.0;
  std::ostringstream name;
  name << "awgn:" << gamma;
  rw.name_ = name.str();
  return rw;
}

RewardFunction RewardFunction::square_root() {
  RewardFunction rw;
  rw.kind_ = Kind::sqrt;
  rw.derivative_at_zero_ = 0.5;
  rw.name_ = "sqrt";
  return rw;
}

RewardFunction RewardFunction::custom(std::string name, Fn value,
                                      Fn derivative, Fn derivative_inverse,
                                      double derivative_at_zero) {
  if (!value || !derivative || !derivative_inverse) {
    throw std::invalid_argument("custom reward needs r, r' and r'^-1");
  }
  if (!(derivative_at_zero > 0.0) || !std::isfinite(derivative_at_zero)) {
    throw std::domain_error("custom reward needs finite r'(0) > 0");
  }
  RewardFunction rw;
  rw.kind_ = Kind::custom;
  rw.derivative_at_zero_ = derivative_at_zero;
  rw.name_ = std::move(name);
  rw.value_ = std::move(value);
  rw.derivative_ = std::move(derivative);
  rw.derivative_inverse_ = std::move(derivative_inverse);
  return rw;
}

double RewardFunction::value(double u) const {
  require_level(u);
  switch (kind_) {
    case Kind::awgn:
      return 0.5 * std::log1p(gamma_ * u);
    case Kind::sqrt:
      return u / (std::sqrt(1.0 + u) + 1.0);
    case Kind::custom:
      return value_(u);
  }
  return 0.0;
}

double RewardFunction::derivative(double u) const {
  require_level(u);
  switch (kind_) {
    case Kind::awgn:
      return gamma_ / (2.0 * (1.0 + gamma_ * u));
    case Kind::sqrt:
      return 0.5 / std::sqrt(1.0 + u);
    case Kind::custom:
      return derivative_(u);
  }
  return 0.0;
}

double RewardFunction::derivative_inverse(double y) const {
  if (!(y > 0.0) || y > derivative_at_zero_ * (1.0 + kDerivativeSlack)) {
    throw std::domain_error("r'^-1 is only defined on (0, r'(0)]");
  }
  switch (kind_) {
    case Kind::awgn:
      return std::max(1.0 / (2.0 * y) - 1.0 / gamma_, 0.0);
    case Kind::sqrt:
      return std::max(1.0 / (4.0 * y * y) - 1.0, 0.0);
    case Kind::custom:
      return derivative_inverse_(std::min(y, derivative_at_zero_));
  }
  return 0.0;
}

RewardFunction parse_reward(const std::string& spec) {
  if (spec == "sqrt") return RewardFunction::square_root();
  if (spec == "awgn") return RewardFunction::awgn(1.0);
  if (spec.rfind("awgn:", 0) == 0) {
    const std::string tail = spec.substr(5);
    std::size_t used = 0;
    double gamma = 0.0;
    try {
      gamma = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tail.size()) {
      throw std::invalid_argument("bad awgn coefficient in reward '" + spec +
                                  "'");
    }
    return RewardFunction::awgn(gamma);
  }
  throw std::invalid_argument("unknown reward '" + spec +
                              "' (expected awgn[:gamma] or sqrt)");
}

std::string to_string(const RewardFunction& rw) { return rw.name(); }

double kappa(const RewardFunction& rw, double s, double x) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::domain_error("kappa scale must be finite and > 0");
  }
  require_level(x);
  if (s > 1.0 &&
      s * rw.derivative(x) > rw.derivative_at_zero() * (1.0 + kDerivativeSlack)) {
    throw std::domain_error("kappa_s(x) is undefined for x < tau_s");
  }
  return kappa_unchecked(rw, s, x);
}

double tau(const RewardFunction& rw, double s) {
  require_scale(s);
  return kappa_unchecked(rw, 1.0 / s, 0.0);
}

double tau_iter(const RewardFunction& rw, double s, int i) {
  require_scale(s);
  if (i < 0) throw std::domain_error("composition depth must be >= 0");
  if (i == 0) return 0.0;
  return kappa_unchecked(rw, std::pow(s, -i), 0.0);
}

double kappa_bar(const RewardFunction& rw, double s, double x) {
  require_scale(s);
  require_level(x);
  if (1.0 >= snapped_log_ratio(rw, s, x)) return 0.0;
  return kappa_unchecked(rw, s, x);
}

double kappa_bar_iter(const RewardFunction& rw, double s, int i, double x) {
  require_scale(s);
  require_level(x);
  if (i < 0) throw std::domain_error("composition depth must be >= 0");
  if (i == 0) return x;
  // Zero from depth M_s(x) on, with the same integer snapping as m_steps.
  if (static_cast<double>(i) >= snapped_log_ratio(rw, s, x)) return 0.0;
  return kappa_unchecked(rw, std::pow(s, i), x);
}

int m_steps(const RewardFunction& rw, double s, double x) {
  return static_cast<int>(std::ceil(snapped_log_ratio(rw, s, x)));
}

int m_tilde_steps(const RewardFunction& rw, double s, double x) {
  return static_cast<int>(std::floor(snapped_log_ratio(rw, s, x))) + 1;
}

double eta(const RewardFunction& rw, double s, double x) {
  require_scale(s);
  require_level(x);
  const double ratio = snapped_log_ratio(rw, s, x);
  if (!(ratio < 1e6)) {
    throw std::domain_error("eta needs too many terms; is r' -> 0 at infinity?");
  }
  double sum = x;
  double scale = s;
  for (int i = 1; i < ratio; ++i, scale *= s) sum += kappa_unchecked(rw, scale, x);
  return sum;
}

double eta_truncated(const RewardFunction& rw, double s, double x, int terms) {
  if (terms < 0) throw std::domain_error("term count must be >= 0");
  double sum = 0.0;
  for (int i = 0; i < terms; ++i) sum += kappa_bar_iter(rw, s, i, x);
  return sum;
}

}  // namespace ehpc
