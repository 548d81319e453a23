#include "ehpc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

namespace ehpc {
namespace {

// Allowance for rounding in a summed series on top of its tail bound.
constexpr double kSeriesRounding = 1e-12;

struct Gain {
  double value = 0.0;
  double tolerance = 0.0;
};

Gain from_series(const EvaluationResult& r) {
  return {r.value, r.residual.value_or(0.0) + kSeriesRounding};
}

// Value iteration on the primary model, with the grid error estimated from
// the coarse model when available.
template <typename Evaluate>
Gain from_value_iteration(const MdpModel& fine, const MdpModel* coarse,
                          Evaluate&& evaluate) {
  const EvaluationResult r = evaluate(fine);
  Gain g{r.value, r.residual.value_or(0.0)};
  if (coarse != nullptr) {
    const EvaluationResult rc = evaluate(*coarse);
    g.tolerance += std::abs(r.value - rc.value) + rc.residual.value_or(0.0);
  }
  return g;
}

ArrivalDistribution make_arrivals(const SweepConfig& config, double c,
                                  double parameter) {
  if (config.parameter_kind == ParameterKind::nmcr) {
    return ArrivalDistribution::from_nmcr(config.family, c, parameter);
  }
  return ArrivalDistribution::from_mcr(config.family, c, parameter);
}

std::vector<GapReport> evaluate_cell(const SweepConfig& config, double c,
                                     double parameter) {
  const ArrivalDistribution arrivals = make_arrivals(config, c, parameter);
  const RewardFunction& rw = config.reward;
  const double p = arrivals.mcr();

  std::vector<GapReport> reports;
  auto add_report = [&](PolicyChoice choice, Gain policy, Gain optimal) {
    GapReport row;
    row.family = config.family;
    row.c = c;
    row.p = p;
    if (config.family != ArrivalDistribution::Family::bernoulli) {
      row.nmcr = arrivals.nmcr();
    }
    row.mcr = p;
    row.policy = to_string(choice);
    row.policy_gain = policy.value;
    row.optimal_gain = optimal.value;
    const GapAndFactor gf = gap_and_factor(policy.value, optimal.value);
    row.additive_gap = gf.additive_gap;
    row.multiplicative_factor = gf.multiplicative_factor;
    row.tolerance = policy.tolerance + optimal.tolerance;
    reports.push_back(std::move(row));
  };

  if (config.family == ArrivalDistribution::Family::bernoulli) {
    const auto omega = StationaryPolicy::maximin_for(rw, p);
    const Gain optimal =
        from_series(bernoulli_reward(omega, rw, c, p, config.series_tol));
    for (PolicyChoice choice : config.policies) {
      const auto policy = make_policy(choice, rw, p);
      add_report(choice,
                 from_series(bernoulli_reward(policy, rw, c, p, config.series_tol)),
                 optimal);
    }
    return reports;
  }

  const MdpModel fine = build_mdp(rw, arrivals, config.intervals);
  std::optional<MdpModel> coarse;
  if (config.grid_error_estimate && config.intervals >= 2) {
    coarse = build_mdp(rw, arrivals, config.intervals / 2);
  }
  const MdpModel* coarse_ptr = coarse ? &*coarse : nullptr;
  const Gain optimal = from_value_iteration(fine, coarse_ptr, [&](const MdpModel& m) {
    return optimal_gain(m, config.value_iteration).evaluation;
  });
  for (PolicyChoice choice : config.policies) {
    const auto policy = make_policy(choice, rw, p);
    Gain gain;
    if (config.policy_method == EvaluationMethod::monte_carlo) {
      const EvaluationResult r = simulate(policy, rw, arrivals, config.simulation);
      gain = {r.value, 3.0 * r.standard_error.value_or(0.0)};
    } else {
      gain = from_value_iteration(fine, coarse_ptr, [&](const MdpModel& m) {
        return policy_gain(m, policy, config.value_iteration);
      });
    }
    add_report(choice, gain, optimal);
  }
  return reports;
}

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

}  // namespace

GapAndFactor gap_and_factor(double policy_gain, double optimal_gain) {
  if (!(optimal_gain > 0.0)) {
    throw DegenerateInstanceError("optimal gain must be > 0 for gap and factor");
  }
  return {optimal_gain - policy_gain, policy_gain / optimal_gain};
}

double universal_upper_bound(const RewardFunction& rw, double c, double p) {
  if (!(c > 0.0)) throw std::domain_error("capacity must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  return rw.value(p * c);
}

double f0(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  const double m = std::floor(1.0 / p);
  return 1.0 - p * m * std::pow(1.0 - p, m);
}

double phi_small_c_factor_limit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  return 1.0 / (2.0 - p);
}

std::string GapReport::invariant_violation() const {
  std::ostringstream msg;
  if (!std::isfinite(policy_gain) || !std::isfinite(optimal_gain)) {
    msg << "non-finite gain";
  } else if (additive_gap < -tolerance) {
    msg << "additive gap " << additive_gap << " below -tolerance " << -tolerance;
  } else if (multiplicative_factor < 0.0) {
    msg << "negative multiplicative factor " << multiplicative_factor;
  } else if (multiplicative_factor > 1.0 + tolerance / optimal_gain) {
    msg << "multiplicative factor " << multiplicative_factor
        << " exceeds 1 beyond tolerance";
  }
  return msg.str();
}

std::vector<GapReport> sweep(const SweepConfig& config) {
  if (config.capacities.empty() || config.parameters.empty() ||
      config.policies.empty()) {
    throw std::invalid_argument("sweep needs nonempty capacity, parameter and "
                                "policy grids");
  }
  if (config.family == ArrivalDistribution::Family::bernoulli &&
      config.parameter_kind == ParameterKind::nmcr) {
    throw std::invalid_argument("Bernoulli sweeps are parameterized by MCR");
  }
  struct Cell {
    double c;
    double parameter;
  };
  std::vector<Cell> cells;
  for (double parameter : config.parameters) {
    for (double c : config.capacities) cells.push_back({c, parameter});
  }

  std::vector<std::vector<GapReport>> results(cells.size());
  const int workers =
      std::clamp(config.workers, 1, static_cast<int>(cells.size()));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  auto work = [&](int worker) {
    try {
      for (std::size_t i = worker; i < cells.size(); i += workers) {
        results[i] = evaluate_cell(config, cells[i].c, cells[i].parameter);
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<GapReport> reports;
  for (auto& cell : results) {
    for (auto& row : cell) reports.push_back(std::move(row));
  }
  return reports;
}

void write_csv(std::ostream& out, std::span<const GapReport> reports) {
  out << "family,c,p,nmcr,mcr,policy,policy_gain,optimal_gain,additive_gap,"
         "multiplicative_factor,tolerance\n";
  for (const auto& row : reports) {
    out << to_string(row.family) << ',' << format_number(row.c) << ','
        << format_number(row.p) << ','
        << (row.nmcr ? format_number(*row.nmcr) : std::string()) << ','
        << format_number(row.mcr) << ',' << row.policy << ','
        << format_number(row.policy_gain) << ','
        << format_number(row.optimal_gain) << ','
        << format_number(row.additive_gap) << ','
        << format_number(row.multiplicative_factor) << ','
        << format_number(row.tolerance) << '\n';
  }
}

std::vector<SweepExtremes> grid_extremes(std::span<const GapReport> reports) {
  std::vector<SweepExtremes> out;
  std::map<std::string, std::size_t> index;
  for (const auto& row : reports) {
    auto [it, inserted] = index.try_emplace(row.policy, out.size());
    if (inserted) {
      out.push_back({row.policy, row.multiplicative_factor, row.additive_gap});
      continue;
    }
    auto& e = out[it->second];
    e.min_factor = std::min(e.min_factor, row.multiplicative_factor);
    e.max_gap = std::max(e.max_gap, row.additive_gap);
  }
  return out;
}

}  // namespace ehpc
