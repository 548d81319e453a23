#include "ehpc/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ehpc {
namespace {

void require_mcr(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("MCR parameter p must lie in (0, 1)");
  }
}

}  // namespace

StationaryPolicy StationaryPolicy::greedy() {
  StationaryPolicy pol;
  pol.kind_ = Kind::greedy;
  pol.p_ = 1.0;
  return pol;
}

StationaryPolicy StationaryPolicy::fixed_fraction(double p) {
  require_mcr(p);
  StationaryPolicy pol;
  pol.kind_ = Kind::fixed_fraction;
  pol.p_ = p;
  return pol;
}

StationaryPolicy StationaryPolicy::maximin(RewardFunction reward, double p,
                                           double inversion_tol,
                                           InversionMethod method) {
  require_mcr(p);
  if (!(inversion_tol > 0.0)) {
    throw std::domain_error("inversion tolerance must be > 0");
  }
  StationaryPolicy pol;
  pol.kind_ = Kind::maximin_generic;
  pol.p_ = p;
  pol.reward_ = std::move(reward);
  pol.inversion_tol_ = inversion_tol;
  pol.method_ = method;
  return pol;
}

StationaryPolicy StationaryPolicy::maximin_awgn(double gamma, double p) {
  require_mcr(p);
  StationaryPolicy pol;
  pol.kind_ = Kind::maximin_awgn;
  pol.p_ = p;
  pol.reward_ = RewardFunction::awgn(gamma);
  return pol;
}

StationaryPolicy StationaryPolicy::maximin_for(const RewardFunction& reward,
                                               double p) {
  if (reward.kind() == RewardFunction::Kind::awgn) {
    return maximin_awgn(reward.gamma(), p);
  }
  return maximin(reward, p);
}

double StationaryPolicy::evaluate(double x) const {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("policy evaluated at a negative battery level");
  }
  switch (kind_) {
    case Kind::greedy:
      return x;
    case Kind::fixed_fraction:
      return p_ * x;
    case Kind::maximin_generic: {
      if (x == 0.0) return 0.0;
      const double u = invert_eta(*reward_, scale(), x, inversion_tol_, method_).x;
      return std::clamp(u, 0.0, x);
    }
    case Kind::maximin_awgn: {
      const double g = reward_->gamma();
      const int m = awgn_m_tilde(g, p_, x);
      // A single active term means omega(x) = x.
      if (m == 1) return x;
      const double keep = std::pow(1.0 - p_, m);
      const double u = (p_ * (g * x + m) / (1.0 - keep) - 1.0) / g;
      return std::clamp(u, 0.0, x);
    }
  }
  return 0.0;
}

double StationaryPolicy::reserve(double x) const {
  return std::max(x - evaluate(x), 0.0);
}

double StationaryPolicy::reserve_iter(int i, double x) const {
  if (i < 0) throw std::domain_error("composition depth must be >= 0");
  for (int k = 0; k < i; ++k) x = reserve(x);
  return x;
}

std::string to_string(StationaryPolicy::Kind kind) {
  switch (kind) {
    case StationaryPolicy::Kind::greedy:
      return "greedy";
    case StationaryPolicy::Kind::fixed_fraction:
      return "fixed_fraction";
    case StationaryPolicy::Kind::maximin_generic:
      return "maximin_generic";
    case StationaryPolicy::Kind::maximin_awgn:
      return "maximin_awgn";
  }
  return "unknown";
}

std::string short_name(const StationaryPolicy& policy) {
  switch (policy.kind()) {
    case StationaryPolicy::Kind::greedy:
      return "greedy";
    case StationaryPolicy::Kind::fixed_fraction:
      return "phi";
    default:
      return "omega";
  }
}

PolicyChoice parse_policy_choice(const std::string& name) {
  if (name == "omega" || name == "maximin") return PolicyChoice::omega;
  if (name == "phi" || name == "fixed_fraction") return PolicyChoice::phi;
  if (name == "greedy") return PolicyChoice::greedy;
  throw std::invalid_argument("unknown policy '" + name +
                              "' (expected omega, phi or greedy)");
}

std::string to_string(PolicyChoice choice) {
  switch (choice) {
    case PolicyChoice::omega:
      return "omega";
    case PolicyChoice::phi:
      return "phi";
    case PolicyChoice::greedy:
      return "greedy";
  }
  return "unknown";
}

StationaryPolicy make_policy(PolicyChoice choice, const RewardFunction& rw,
                             double p) {
  switch (choice) {
    case PolicyChoice::omega:
      return StationaryPolicy::maximin_for(rw, p);
    case PolicyChoice::phi:
      return StationaryPolicy::fixed_fraction(p);
    case PolicyChoice::greedy:
      return StationaryPolicy::greedy();
  }
  throw std::invalid_argument("unknown policy choice");
}

InversionResult invert_eta(const RewardFunction& rw, double s, double x,
                           double tol, InversionMethod method) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("eta inverse needs x >= 0");
  }
  if (x == 0.0) return {};
  // eta(0) = 0 and eta(y) >= y, so the root lies in [0, x].
  return invert_increasing([&](double y) { return eta(rw, s, y); }, x, 0.0, x,
                           tol, method);
}

int awgn_m_tilde(double gamma, double p, double x) {
  require_mcr(p);
  if (!(x >= 0.0)) throw std::domain_error("awgn_m_tilde needs x >= 0");
  const double level = gamma * x;
  double keep = 1.0;
  for (int m = 1; m < 100'000'000; ++m) {
    keep *= 1.0 - p;
    if ((1.0 + p * (level + m)) * keep < 1.0) return m;
  }
  throw std::domain_error("awgn_m_tilde: search did not terminate");
}

std::vector<double> ergodic_set(const StationaryPolicy& policy, double c) {
  if (!policy.is_maximin()) {
    throw std::invalid_argument("ergodic set is defined for maximin policies");
  }
  if (!(c > 0.0)) throw std::domain_error("capacity must be > 0");
  const int steps = m_steps(*policy.reward(), policy.scale(), policy(c));
  std::vector<double> levels{c};
  for (int i = 1; i <= steps; ++i) levels.push_back(policy.reserve(levels.back()));
  // reserve^(M)(c) is zero in exact arithmetic; drop rounding residue.
  levels.back() = 0.0;
  return levels;
}

std::vector<Endpoint> endpoints(double gamma, double p, int k_max) {
  require_mcr(p);
  if (k_max < 0) throw std::domain_error("k_max must be >= 0");
  std::vector<Endpoint> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    const double grow = std::pow(1.0 - p, -k);
    out.push_back({k, ((grow - 1.0) / p - k) / gamma, (grow - 1.0) / gamma});
  }
  return out;
}

std::vector<Endpoint> kink_points(const RewardFunction& rw, double p,
                                  int k_max) {
  require_mcr(p);
  if (k_max < 0) throw std::domain_error("k_max must be >= 0");
  const double s = 1.0 / (1.0 - p);
  std::vector<Endpoint> out;
  for (int k = 0; k <= k_max; ++k) {
    const double y = tau_iter(rw, s, k);
    out.push_back({k, eta(rw, s, y), y});
  }
  return out;
}

double greed_index(const StationaryPolicy& policy, const RewardFunction& rw,
                   double c, int grid_n) {
  if (!(c > 0.0)) throw std::domain_error("capacity must be > 0");
  if (grid_n < 2) throw std::domain_error("greed index grid needs >= 2 points");
  double lowest = 1.0;
  for (int j = 0; j < grid_n; ++j) {
    const double x = c * j / (grid_n - 1);
    const double now = policy(x);
    const double next = policy(std::max(x - now, 0.0));
    lowest = std::min(lowest, rw.derivative(now) / rw.derivative(next));
  }
  return 1.0 - lowest;
}

NormalityReport normality_check(const StationaryPolicy& policy, double c,
                                int grid_n, double slack) {
  if (grid_n < 3) throw std::domain_error("normality grid needs >= 3 points");
  if (!(c > 0.0)) throw std::domain_error("capacity must be > 0");
  std::vector<double> values(static_cast<std::size_t>(grid_n));
  for (int j = 0; j < grid_n; ++j) values[j] = policy(c * j / (grid_n - 1));

  NormalityReport report;
  report.worst_decrease = -INFINITY;
  report.worst_second_difference = -INFINITY;
  for (int j = 0; j + 1 < grid_n; ++j) {
    const double decrease = values[j] - values[j + 1];
    if (decrease > report.worst_decrease) report.worst_decrease = decrease;
    if (decrease > slack) {
      if (report.nondecreasing) report.worst_x = c * j / (grid_n - 1);
      report.nondecreasing = false;
    }
  }
  for (int j = 1; j + 1 < grid_n; ++j) {
    const double second = values[j + 1] - 2.0 * values[j] + values[j - 1];
    if (second > report.worst_second_difference) {
      report.worst_second_difference = second;
    }
    if (second > slack) {
      if (report.concave && report.nondecreasing) {
        report.worst_x = c * j / (grid_n - 1);
      }
      report.concave = false;
    }
  }
  return report;
}

}  // namespace ehpc
