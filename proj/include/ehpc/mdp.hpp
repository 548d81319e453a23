#pragma once

#include <span>
#include <vector>

#include "ehpc/arrivals.hpp"
#include "ehpc/evaluation.hpp"
#include "ehpc/policy.hpp"
#include "ehpc/reward.hpp"

namespace ehpc {

/// Discretized controlled battery chain. States and actions share the grid
/// j*h, h = c/N; in state j the feasible actions are k = 0..j (consume k*h),
/// and the next state is min(j - k + m, N) with m drawn from the discretized
/// arrival pmf. Arrivals and post-decision levels are both on the grid, so no
/// further snapping is needed.
struct MdpModel {
  double c = 0.0;
  int intervals = 0;  // N
  double step = 0.0;  // h
  std::vector<double> grid;
  std::vector<double> action_reward;  // r(k h), k = 0..N
  DiscretizedPMF arrivals;
  // Nonzero entries of the arrival pmf and tail[t] = P(m >= t).
  std::vector<int> support;
  std::vector<double> support_mass;
  std::vector<double> tail;

  int states() const { return intervals + 1; }

  /// Distribution of the next state from state j under action k.
  std::vector<double> transition_row(int state, int action) const;

  /// out[l] = E v(min(l + m, N)) for every post-decision level l.
  void expected_next_value(std::span<const double> v,
                           std::span<double> out) const;
};

MdpModel build_mdp(const RewardFunction& rw, const ArrivalDistribution& arrivals,
                   int intervals);
/// Model for an explicit arrival pmf on the grid j*c/N.
MdpModel build_mdp(const RewardFunction& rw, const DiscretizedPMF& arrivals);

struct ValueIterationOptions {
  double eps = 1e-9;  // span stopping threshold
  long max_iterations = 1'000'000;
};

struct OptimalGainResult {
  EvaluationResult evaluation;
  std::vector<int> actions;  // maximizing action index per state
};

/// Relative value iteration v <- max_k [r(k h) + E v(next)] - (same at state 0),
/// stopped when the span of successive differences drops below eps. The gain
/// is the midpoint of the final difference range.
/// Throws NonConvergenceError past the iteration cap.
OptimalGainResult optimal_gain(const MdpModel& model,
                               const ValueIterationOptions& options = {});

/// Actions of `policy` at grid states, snapped down to the nearest grid action.
std::vector<int> snap_policy(const MdpModel& model,
                             const StationaryPolicy& policy);

/// Gain of a fixed action table under the same span stopping rule.
EvaluationResult table_gain(const MdpModel& model, std::span<const int> actions,
                            const ValueIterationOptions& options = {});

/// Gain of a stationary policy on the discretized model.
EvaluationResult policy_gain(const MdpModel& model,
                             const StationaryPolicy& policy,
                             const ValueIterationOptions& options = {});

}  // namespace ehpc
