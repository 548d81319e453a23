#pragma once

#include <functional>
#include <string>

namespace ehpc {

/// Concave reward r(u) with the derivative calculus used to build policies.
///
/// Three kinds are supported: the AWGN rate 0.5*ln(1 + gamma*u), the square
/// root reward sqrt(1 + u) - 1, and a custom reward given by callables for
/// r, r' and the inverse of r'. The calculus (kappa, tau, eta, ...) never
/// differentiates numerically; custom rewards must supply r' and r'^-1.
class RewardFunction {
 public:
  enum class Kind { awgn, sqrt, custom };

  using Fn = std::function<double(double)>;

  static RewardFunction awgn(double gamma = 1.0);
  static RewardFunction square_root();
  /// `derivative_at_zero` must equal r'(0) and be finite.
  static RewardFunction custom(std::string name, Fn value, Fn derivative,
                               Fn derivative_inverse,
                               double derivative_at_zero);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  const std::string& name() const { return name_; }

  /// r(u), u >= 0.
  double value(double u) const;
  /// r'(u), u >= 0.
  double derivative(double u) const;
  /// r'^-1(y) for y in (0, r'(0)].
  double derivative_inverse(double y) const;
  double derivative_at_zero() const { return derivative_at_zero_; }

 private:
  RewardFunction() = default;

  Kind kind_ = Kind::awgn;
  double gamma_ = 1.0;
  double derivative_at_zero_ = 0.5;
  std::string name_;
  Fn value_;
  Fn derivative_;
  Fn derivative_inverse_;
};

/// Parses "awgn", "awgn:<gamma>" or "sqrt".
RewardFunction parse_reward(const std::string& spec);
std::string to_string(const RewardFunction& rw);

// Marginal-utility conjugation and its derived quantities. All functions
// take a scale factor s > 1 unless stated otherwise and throw
// std::domain_error on invalid arguments.

/// kappa_s(x) = r'^-1(s r'(x)) for x >= tau_s. Any s > 0 is accepted here
/// since tau_s itself is kappa_{1/s}(0).
double kappa(const RewardFunction& rw, double s, double x);

/// tau_s = r'^-1(r'(0)/s), the level below which kappa_s is zero.
double tau(const RewardFunction& rw, double s);

/// tau_s^(i) = kappa_{s^-i}(0) = tau_{s^i}.
double tau_iter(const RewardFunction& rw, double s, int i);

/// Zero-extended conjugation kappa_s(max(x, tau_s)).
double kappa_bar(const RewardFunction& rw, double s, double x);

/// i-fold composition of kappa_bar, evaluated as kappa_{s^i}(max(x, tau_s^(i))).
double kappa_bar_iter(const RewardFunction& rw, double s, int i, double x);

/// Least i >= 0 with kappa_bar_iter(s, i, x) == 0, i.e.
/// ceil(ln(r'(0)/r'(x)) / ln s).
int m_steps(const RewardFunction& rw, double s, double x);

/// floor(ln(r'(0)/r'(x)) / ln s) + 1.
int m_tilde_steps(const RewardFunction& rw, double s, double x);

/// eta_s(x): sum of the kappa_bar compositions of x, truncated at M_s(x).
double eta(const RewardFunction& rw, double s, double x);

/// eta_s(x) summed over an explicit number of terms, sum_{i<terms} kappa_bar_iter(s, i, x).
double eta_truncated(const RewardFunction& rw, double s, double x, int terms);

}  // namespace ehpc
