#include "ehpc/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ehpc {
namespace {

struct SpanStep {
  double lo;
  double hi;
};

// Replaces v by next - next[0] and returns the range of next - v.
SpanStep renormalize(std::vector<double>& v, const std::vector<double>& next) {
  SpanStep range{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
  const double ref = next[0];
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double d = next[j] - v[j];
    range.lo = std::min(range.lo, d);
    range.hi = std::max(range.hi, d);
    v[j] = next[j] - ref;
  }
  return range;
}

[[noreturn]] void throw_non_convergence(long iterations, double span) {
  std::ostringstream msg;
  msg << "value iteration did not converge in " << iterations
      << " iterations (last span " << span << ")";
  throw NonConvergenceError(msg.str(), span);
}

void require_options(const ValueIterationOptions& options) {
  if (!(options.eps > 0.0)) throw std::domain_error("eps must be > 0");
  if (options.max_iterations < 1) {
    throw std::domain_error("iteration cap must be >= 1");
  }
}

}  // namespace

std::vector<double> MdpModel::transition_row(int state, int action) const {
  if (state < 0 || state > intervals || action < 0 || action > state) {
    throw std::out_of_range("infeasible state/action pair");
  }
  std::vector<double> row(static_cast<std::size_t>(states()), 0.0);
  const int post = state - action;
  for (std::size_t i = 0; i < support.size(); ++i) {
    row[std::min(post + support[i], intervals)] += support_mass[i];
  }
  return row;
}

void MdpModel::expected_next_value(std::span<const double> v,
                                   std::span<double> out) const {
  const int n = intervals;
  const double top = v[n];
  const std::size_t count = support.size();
  for (int l = 0; l <= n; ++l) {
    const int room = n - l;  // arrivals m >= room saturate the battery
    double acc = tail[room] * top;
    for (std::size_t i = 0; i < count && support[i] < room; ++i) {
      acc += support_mass[i] * v[l + support[i]];
    }
    out[l] = acc;
  }
}

MdpModel build_mdp(const RewardFunction& rw, const DiscretizedPMF& arrivals) {
  const int n = arrivals.intervals();
  if (n < 1) throw std::domain_error("MDP grid needs N >= 1");
  if (!(arrivals.c > 0.0)) throw std::domain_error("capacity must be > 0");
  if (arrivals.mass.size() != arrivals.grid.size()) {
    throw std::invalid_argument("pmf grid and mass sizes differ");
  }
  double total = 0.0;
  for (double m : arrivals.mass) {
    if (!(m >= 0.0)) throw std::domain_error("pmf masses must be >= 0");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::domain_error("pmf masses must sum to 1");
  }

  MdpModel model;
  model.c = arrivals.c;
  model.intervals = n;
  model.step = arrivals.c / n;
  model.arrivals = arrivals;
  model.grid.resize(static_cast<std::size_t>(n) + 1);
  model.action_reward.resize(model.grid.size());
  for (int j = 0; j <= n; ++j) {
    model.grid[j] = j == n ? arrivals.c : j * model.step;
    model.action_reward[j] = rw.value(model.grid[j]);
  }
  for (int m = 0; m <= n; ++m) {
    if (arrivals.mass[m] > 0.0) {
      model.support.push_back(m);
      model.support_mass.push_back(arrivals.mass[m]);
    }
  }
  model.tail.assign(static_cast<std::size_t>(n) + 2, 0.0);
  for (int t = n; t >= 0; --t) model.tail[t] = model.tail[t + 1] + arrivals.mass[t];
  return model;
}

MdpModel build_mdp(const RewardFunction& rw, const ArrivalDistribution& arrivals,
                   int intervals) {
  return build_mdp(rw, arrivals.discretize(intervals));
}

OptimalGainResult optimal_gain(const MdpModel& model,
                               const ValueIterationOptions& options) {
  require_options(options);
  const int n = model.intervals;
  const std::size_t size = static_cast<std::size_t>(model.states());
  std::vector<double> v(size, 0.0), next(size), expected(size);
  const double* reward = model.action_reward.data();

  double span = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= options.max_iterations; ++it) {
    model.expected_next_value(v, expected);
    const double* w = expected.data();
    for (int j = 0; j <= n; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (int k = 0; k <= j; ++k) {
        const double q = reward[k] + w[j - k];
        best = q > best ? q : best;
      }
      next[j] = best;
    }
    const SpanStep range = renormalize(v, next);
    span = range.hi - range.lo;
    if (span < options.eps) {
      OptimalGainResult result;
      result.evaluation.value = 0.5 * (range.lo + range.hi);
      result.evaluation.method = EvaluationMethod::value_iteration;
      result.evaluation.residual = span;
      // Greedy action table for the converged relative values.
      model.expected_next_value(v, expected);
      result.actions.resize(size);
      for (int j = 0; j <= n; ++j) {
        int arg = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 0; k <= j; ++k) {
          const double q = reward[k] + expected[j - k];
          if (q > best) {
            best = q;
            arg = k;
          }
        }
        result.actions[j] = arg;
      }
      return result;
    }
  }
  throw_non_convergence(options.max_iterations, span);
}

std::vector<int> snap_policy(const MdpModel& model,
                             const StationaryPolicy& policy) {
  std::vector<int> actions(static_cast<std::size_t>(model.states()));
  for (int j = 0; j <= model.intervals; ++j) {
    const double u = policy(model.grid[j]);
    // Tolerate rounding in u / h so that exact grid consumptions stay put.
    const double index = u / model.step;
    const int k = static_cast<int>(std::floor(index + 1e-9 * std::max(1.0, index)));
    actions[j] = std::clamp(k, 0, j);
  }
  return actions;
}

EvaluationResult table_gain(const MdpModel& model, std::span<const int> actions,
                            const ValueIterationOptions& options) {
  require_options(options);
  const int n = model.intervals;
  if (actions.size() != static_cast<std::size_t>(model.states())) {
    throw std::invalid_argument("action table size must equal the state count");
  }
  for (int j = 0; j <= n; ++j) {
    if (actions[j] < 0 || actions[j] > j) {
      throw AdmissibilityError("action table consumes more than the state holds");
    }
  }
  const std::size_t size = static_cast<std::size_t>(model.states());
  std::vector<double> v(size, 0.0), next(size), expected(size);
  double span = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= options.max_iterations; ++it) {
    model.expected_next_value(v, expected);
    for (int j = 0; j <= n; ++j) {
      next[j] = model.action_reward[actions[j]] + expected[j - actions[j]];
    }
    const SpanStep range = renormalize(v, next);
    span = range.hi - range.lo;
    if (span < options.eps) {
      EvaluationResult result;
      result.value = 0.5 * (range.lo + range.hi);
      result.method = EvaluationMethod::value_iteration;
      result.residual = span;
      return result;
    }
  }
  throw_non_convergence(options.max_iterations, span);
}

EvaluationResult policy_gain(const MdpModel& model,
                             const StationaryPolicy& policy,
                             const ValueIterationOptions& options) {
  const auto actions = snap_policy(model, policy);
  return table_gain(model, actions, options);
}

}  // namespace ehpc
