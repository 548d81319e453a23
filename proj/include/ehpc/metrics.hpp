#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehpc/arrivals.hpp"
#include "ehpc/evaluation.hpp"
#include "ehpc/mdp.hpp"
#include "ehpc/policy.hpp"
#include "ehpc/reward.hpp"

namespace ehpc {

/// Raised for instances whose optimal gain is not positive.
class DegenerateInstanceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct GapAndFactor {
  double additive_gap = 0.0;           // optimal - policy
  double multiplicative_factor = 0.0;  // policy / optimal
};

GapAndFactor gap_and_factor(double policy_gain, double optimal_gain);

/// r(p c): no policy earns more than this for any arrival law with MCR p.
double universal_upper_bound(const RewardFunction& rw, double c, double p);

/// 1 - p M (1-p)^M with M = floor(1/p); lower bound on the factor of the
/// AWGN maximin policy, never below 1 - 1/e.
double f0(double p);

/// 1/(2 - p), the small-capacity limit of the fixed fraction factor under
/// Bernoulli arrivals.
double phi_small_c_factor_limit(double p);

struct GapReport {
  ArrivalDistribution::Family family = ArrivalDistribution::Family::bernoulli;
  double c = 0.0;
  double p = 0.0;  // MCR the policies were tuned to
  std::optional<double> nmcr;
  double mcr = 0.0;
  std::string policy;
  double policy_gain = 0.0;
  double optimal_gain = 0.0;
  double additive_gap = 0.0;
  double multiplicative_factor = 0.0;
  /// Sum of the tolerances of the evaluators behind this row.
  double tolerance = 0.0;

  /// Empty when the row is consistent, otherwise a description of the
  /// violated invariant.
  std::string invariant_violation() const;
};

enum class ParameterKind { mcr, nmcr };

struct SweepConfig {
  RewardFunction reward = RewardFunction::awgn(1.0);
  ArrivalDistribution::Family family = ArrivalDistribution::Family::bernoulli;
  std::vector<double> capacities;
  std::vector<double> parameters;
  ParameterKind parameter_kind = ParameterKind::mcr;
  std::vector<PolicyChoice> policies{PolicyChoice::omega, PolicyChoice::phi};
  /// Evaluator for policy gains in non-Bernoulli cells: value_iteration or
  /// monte_carlo.
  EvaluationMethod policy_method = EvaluationMethod::value_iteration;
  int intervals = 500;
  /// Estimate the grid error from a second model with half the intervals.
  bool grid_error_estimate = true;
  ValueIterationOptions value_iteration;
  SimulationOptions simulation;
  double series_tol = 1e-15;
  int workers = 1;  // cells evaluated concurrently
};

/// One report per (c, parameter, policy) cell in grid order. Bernoulli cells
/// use the exact series (omega's series value is the optimal gain); other
/// cells use value iteration for the optimal gain.
std::vector<GapReport> sweep(const SweepConfig& config);

/// Header: family,c,p,nmcr,mcr,policy,policy_gain,optimal_gain,additive_gap,
/// multiplicative_factor,tolerance
void write_csv(std::ostream& out, std::span<const GapReport> reports);

/// Grid approximations of the lower multiplicative factor and the upper
/// additive gap of one policy over a sweep.
struct SweepExtremes {
  std::string policy;
  double min_factor = 0.0;
  double max_gap = 0.0;
};
std::vector<SweepExtremes> grid_extremes(std::span<const GapReport> reports);

}  // namespace ehpc
