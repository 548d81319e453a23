#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "ehpc/arrivals.hpp"
#include "ehpc/policy.hpp"
#include "ehpc/reward.hpp"

namespace ehpc {

/// Raised when a policy asks for more energy than the battery holds.
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative evaluator hits its iteration cap.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double last_span)
      : std::runtime_error(what), last_span_(last_span) {}
  double last_span() const { return last_span_; }

 private:
  double last_span_;
};

// ---------------------------------------------------------------------------
// Battery dynamics

struct BatteryState {
  double b_minus = 0.0;  // stored energy before the arrival
  double b = 0.0;        // stored energy after the arrival
};

struct StepOutcome {
  BatteryState state;      // b is the post-arrival level of this slot
  double next_b_minus;     // level carried into the next slot
  double consumed;         // consumption actually applied
};

/// Requests above b by at most this much are clamped silently.
inline constexpr double kAdmissibilitySlack = 1e-9;

/// One slot: b = min(b_minus + x, c), then consume min(u, b).
/// Throws AdmissibilityError if u > b + kAdmissibilitySlack.
StepOutcome step(double b_minus, double x, double u, double c);

// ---------------------------------------------------------------------------
// Evaluation results

enum class EvaluationMethod { bernoulli_series, monte_carlo, value_iteration };

std::string to_string(EvaluationMethod method);
EvaluationMethod parse_method(const std::string& name);

struct EvaluationResult {
  double value = 0.0;
  EvaluationMethod method = EvaluationMethod::bernoulli_series;
  /// Standard error across paths (Monte Carlo).
  std::optional<double> standard_error;
  /// Final span of value differences (value iteration) or the tail bound of
  /// the truncated series.
  std::optional<double> residual;
};

// ---------------------------------------------------------------------------
// Exact series under Bernoulli arrivals

/// Long-run average reward of a stationary policy under Bernoulli(p)
/// arrivals at capacity c:
///   sum_i p (1-p)^{i-1} r(sigma(reserve^(i-1)(c))).
/// The series stops at the first N with (1-p)^N r(c) < tol, when the reserve
/// reaches zero, or after M(omega(c)) terms for maximin policies.
EvaluationResult bernoulli_reward(const StationaryPolicy& policy,
                                  const RewardFunction& rw, double c, double p,
                                  double tol = 1e-15);

struct DerivativeCheck {
  double finite_difference = 0.0;  // central difference of the series
  double analytic = 0.0;           // p r'(omega(c))
  bool skipped = false;            // c within h of a kink of omega
  std::string note;
};

/// Compares d/dc of the Bernoulli series of omega with p r'(omega(c)).
DerivativeCheck bernoulli_derivative_check(const RewardFunction& rw, double p,
                                           double c, double h = 1e-4);

// ---------------------------------------------------------------------------
// Monte Carlo

struct SimulationOptions {
  long horizon = 100'000;   // slots per path
  int paths = 64;
  std::uint64_t seed = 1;
  int workers = 1;          // threads; the result does not depend on this
};

using ArrivalSampler = std::function<double(Rng&)>;

/// Mean over paths of the horizon-average reward from an empty battery.
/// Path k draws from Rng(derive_seed(seed, k)).
EvaluationResult simulate(const StationaryPolicy& policy,
                          const RewardFunction& rw,
                          const ArrivalDistribution& arrivals,
                          const SimulationOptions& options);

/// Same, for an arbitrary arrival sampler on [0, c].
EvaluationResult simulate_with_sampler(const StationaryPolicy& policy,
                                       const RewardFunction& rw, double c,
                                       const ArrivalSampler& sampler,
                                       const SimulationOptions& options);

}  // namespace ehpc
