#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ehpc/reward.hpp"
#include "ehpc/root_finding.hpp"

namespace ehpc {

/// Universal stationary policy: consumption as a function of the
/// post-arrival battery level, defined on all of [0, inf) with
/// 0 <= sigma(x) <= x. Capacity clamping is the battery's job.
class StationaryPolicy {
 public:
  enum class Kind { greedy, fixed_fraction, maximin_generic, maximin_awgn };

  static constexpr double kDefaultInversionTol = 1e-12;

  /// sigma(x) = x.
  static StationaryPolicy greedy();
  /// phi(x) = p x.
  static StationaryPolicy fixed_fraction(double p);
  /// omega(x) = eta_{1/(1-p)}^-1(x), found by bracketed inversion of eta.
  static StationaryPolicy maximin(RewardFunction reward, double p,
                                  double inversion_tol = kDefaultInversionTol,
                                  InversionMethod method =
                                      InversionMethod::safeguarded_secant);
  /// Piecewise-linear closed form of omega for the AWGN reward.
  static StationaryPolicy maximin_awgn(double gamma, double p);
  /// Closed form for AWGN rewards, generic inversion otherwise.
  static StationaryPolicy maximin_for(const RewardFunction& reward, double p);

  Kind kind() const { return kind_; }
  bool is_maximin() const {
    return kind_ == Kind::maximin_generic || kind_ == Kind::maximin_awgn;
  }
  /// MCR parameter; 1 for greedy.
  double p() const { return p_; }
  /// Scale factor 1/(1-p) used by the maximin construction.
  double scale() const { return 1.0 / (1.0 - p_); }
  const std::optional<RewardFunction>& reward() const { return reward_; }
  double inversion_tol() const { return inversion_tol_; }

  /// sigma(x). Throws std::domain_error for x < 0.
  double evaluate(double x) const;
  double operator()(double x) const { return evaluate(x); }

  /// Reserve x - sigma(x).
  double reserve(double x) const;
  /// i-fold composition of the reserve.
  double reserve_iter(int i, double x) const;

 private:
  StationaryPolicy() = default;

  Kind kind_ = Kind::greedy;
  double p_ = 1.0;
  std::optional<RewardFunction> reward_;
  double inversion_tol_ = kDefaultInversionTol;
  InversionMethod method_ = InversionMethod::safeguarded_secant;
};

std::string to_string(StationaryPolicy::Kind kind);

/// Policy families selectable from configuration.
enum class PolicyChoice { omega, phi, greedy };

/// Accepts omega / maximin, phi / fixed_fraction, greedy.
PolicyChoice parse_policy_choice(const std::string& name);
std::string to_string(PolicyChoice choice);
/// The chosen policy tuned to MCR p (greedy ignores p).
StationaryPolicy make_policy(PolicyChoice choice, const RewardFunction& rw,
                             double p);

/// Short name used in CLI output: greedy, phi, omega.
std::string short_name(const StationaryPolicy& policy);

/// Inverse of eta_s at x, with |eta_s(y) - x| <= tol where attainable.
InversionResult invert_eta(const RewardFunction& rw, double s, double x,
                           double tol = StationaryPolicy::kDefaultInversionTol,
                           InversionMethod method =
                               InversionMethod::safeguarded_secant);

/// Least integer m >= 1 with [1 + p(gamma x + m)](1-p)^m < 1.
int awgn_m_tilde(double gamma, double p, double x);

/// Battery levels reserve^(i)(c), 0 <= i <= M(omega(c)), visited in steady
/// state under Bernoulli arrivals. Strictly decreasing, ends at 0.
std::vector<double> ergodic_set(const StationaryPolicy& policy, double c);

struct Endpoint {
  int k = 0;
  double x = 0.0;  // battery level
  double y = 0.0;  // consumption omega(x)
};

/// Segment endpoints E_0..E_{k_max} of the piecewise-linear AWGN policy.
std::vector<Endpoint> endpoints(double gamma, double p, int k_max);

/// Points (eta_s(tau_s^(k)), tau_s^(k)) where omega changes its number of
/// active terms; for the AWGN reward these are exactly `endpoints`.
std::vector<Endpoint> kink_points(const RewardFunction& rw, double p,
                                  int k_max);

/// Grid approximation of 1 - essinf_{0<=x<=c} r'(sigma(x)) / r'(sigma(reserve(x))).
double greed_index(const StationaryPolicy& policy, const RewardFunction& rw,
                   double c, int grid_n = 10'001);

struct NormalityReport {
  bool nondecreasing = true;
  bool concave = true;
  /// Largest decrease between consecutive grid values (<= 0 when monotone).
  double worst_decrease = 0.0;
  /// Largest positive second difference.
  double worst_second_difference = 0.0;
  double worst_x = 0.0;
  bool normal() const { return nondecreasing && concave; }
};

/// Checks monotonicity and nonpositive second differences of sigma on a
/// uniform grid over [0, c] with the given slack.
NormalityReport normality_check(const StationaryPolicy& policy, double c,
                                int grid_n = 10'001, double slack = 1e-9);

}  // namespace ehpc
