#include "ehpc/cli/commands.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "ehpc/arrivals.hpp"
#include "ehpc/evaluation.hpp"
#include "ehpc/mdp.hpp"
#include "ehpc/metrics.hpp"
#include "ehpc/policy.hpp"
#include "ehpc/reward.hpp"
#include "ehpc/verify.hpp"

namespace ehpc::cli {
namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open '" + path + "' for writing");
  file << content;
  if (!file) throw ConfigError("failed writing '" + path + "'");
}

std::string endpoints_path(const RunConfig& config) {
  if (!config.endpoints_out.empty()) return config.endpoints_out;
  if (config.out.empty()) return {};
  const std::string& out = config.out;
  const auto dot = out.rfind('.');
  const auto slash = out.find_last_of("/\\");
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return out.substr(0, dot) + "_endpoints" + out.substr(dot);
  }
  return out + "_endpoints";
}

std::string method_label(EvaluationMethod m) {
  switch (m) {
    case EvaluationMethod::bernoulli_series:
      return "series";
    case EvaluationMethod::monte_carlo:
      return "mc";
    case EvaluationMethod::value_iteration:
      return "vi";
  }
  return "unknown";
}

EvaluationMethod resolve_method(const RunConfig& config, bool bernoulli) {
  if (config.method) return parse_method(*config.method);
  return bernoulli ? EvaluationMethod::bernoulli_series
                   : EvaluationMethod::value_iteration;
}

ArrivalDistribution make_arrivals(const RunConfig& config, double c) {
  const auto family = parse_family(config.family);
  if (!config.nmcr.empty()) {
    return ArrivalDistribution::from_nmcr(family, c, config.nmcr.front());
  }
  return ArrivalDistribution::from_mcr(family, c, config.mcr.front());
}

SimulationOptions simulation_options(const RunConfig& config) {
  SimulationOptions o;
  o.horizon = config.horizon;
  o.paths = config.paths;
  o.seed = config.seed;
  o.workers = config.workers;
  return o;
}

ValueIterationOptions vi_options(const RunConfig& config) {
  ValueIterationOptions o;
  o.eps = config.eps;
  return o;
}

json report_json(const GapReport& row) {
  json j;
  j["family"] = to_string(row.family);
  j["c"] = row.c;
  j["p"] = row.p;
  j["nmcr"] = row.nmcr ? json(*row.nmcr) : json(nullptr);
  j["mcr"] = row.mcr;
  j["policy"] = row.policy;
  j["policy_gain"] = row.policy_gain;
  j["optimal_gain"] = row.optimal_gain;
  j["additive_gap"] = row.additive_gap;
  j["multiplicative_factor"] = row.multiplicative_factor;
  j["tolerance"] = row.tolerance;
  return j;
}

}  // namespace

int cmd_curve(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const RewardFunction rw = parse_reward(config.reward);
  const double p = config.mcr.front();
  const auto omega = StationaryPolicy::maximin_for(rw, p);
  const auto phi = StationaryPolicy::fixed_fraction(p);

  // Endpoints up to the first one past x_max.
  std::vector<Endpoint> ends;
  for (int k_max = 8;; k_max *= 2) {
    ends = rw.kind() == RewardFunction::Kind::awgn
               ? endpoints(rw.gamma(), p, k_max)
               : kink_points(rw, p, k_max);
    if (ends.back().x > config.x_max || k_max >= 4096) break;
  }
  while (ends.size() > 1 && ends[ends.size() - 2].x > config.x_max) ends.pop_back();

  const bool as_json = config.format == OutputFormat::json;
  std::ostringstream curve;
  json rows = json::array();
  if (!as_json) curve << "x,omega,phi,greedy\n";
  for (int j = 0; j < config.samples; ++j) {
    const double x = j == config.samples - 1
                         ? config.x_max
                         : config.x_max * j / (config.samples - 1);
    if (as_json) {
      rows.push_back({{"x", x}, {"omega", omega(x)}, {"phi", phi(x)}, {"greedy", x}});
    } else {
      curve << fmt(x) << ',' << fmt(omega(x)) << ',' << fmt(phi(x)) << ',' << fmt(x)
            << '\n';
    }
  }

  std::ostringstream end_csv;
  json end_rows = json::array();
  end_csv << "k,x,y\n";
  for (const auto& e : ends) {
    end_csv << e.k << ',' << fmt(e.x) << ',' << fmt(e.y) << '\n';
    end_rows.push_back({{"k", e.k}, {"x", e.x}, {"y", e.y}});
  }

  if (as_json) {
    json doc{{"reward", to_string(rw)}, {"p", p}, {"curve", rows}, {"endpoints", end_rows}};
    emit(config.out, doc.dump(2) + "\n", out);
    return kExitOk;
  }
  emit(config.out, curve.str(), out);
  const std::string path = endpoints_path(config);
  if (!path.empty()) emit(path, end_csv.str(), out);
  return kExitOk;
}

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const RewardFunction rw = parse_reward(config.reward);
  const double c = config.capacities.front();
  const ArrivalDistribution arrivals = make_arrivals(config, c);
  const bool bernoulli = arrivals.family() == ArrivalDistribution::Family::bernoulli;
  const double p = arrivals.mcr();
  const PolicyChoice choice = parse_policy_choice(config.policy);
  const auto policy = make_policy(choice, rw, p);
  const EvaluationMethod method = resolve_method(config, bernoulli);

  EvaluationResult result;
  switch (method) {
    case EvaluationMethod::bernoulli_series:
      result = bernoulli_reward(policy, rw, c, p, config.tol);
      break;
    case EvaluationMethod::monte_carlo:
      result = simulate(policy, rw, arrivals, simulation_options(config));
      break;
    case EvaluationMethod::value_iteration:
      result = policy_gain(build_mdp(rw, arrivals, config.grid_intervals), policy,
                           vi_options(config));
      break;
  }

  json j;
  j["method"] = method_label(method);
  j["value"] = result.value;
  if (result.standard_error) j["stderr"] = *result.standard_error;
  if (result.residual) j["residual"] = *result.residual;
  j["policy"] = to_string(choice);
  j["family"] = to_string(arrivals.family());
  j["c"] = c;
  j["p"] = p;
  if (method == EvaluationMethod::monte_carlo) {
    j["n"] = config.horizon;
    j["paths"] = config.paths;
    j["seed"] = config.seed;
  }
  if (method == EvaluationMethod::value_iteration) j["N"] = config.grid_intervals;

  if (config.format == OutputFormat::csv) {
    std::ostringstream s;
    std::string header, line;
    for (const auto& [key, value] : j.items()) {
      header += (header.empty() ? "" : ",") + key;
      line += (line.empty() ? "" : ",") +
              (value.is_number_float() ? fmt(value.get<double>())
               : value.is_string()     ? value.get<std::string>()
                                       : value.dump());
    }
    emit(config.out, header + "\n" + line + "\n", out);
  } else {
    emit(config.out, j.dump(2) + "\n", out);
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  SweepConfig sweep_config;
  sweep_config.reward = parse_reward(config.reward);
  sweep_config.family = parse_family(config.family);
  sweep_config.capacities = config.capacities;
  if (!config.nmcr.empty()) {
    sweep_config.parameters = config.nmcr;
    sweep_config.parameter_kind = ParameterKind::nmcr;
  } else {
    sweep_config.parameters = config.mcr;
    sweep_config.parameter_kind = ParameterKind::mcr;
  }
  const bool bernoulli = sweep_config.family == ArrivalDistribution::Family::bernoulli;
  const EvaluationMethod method = resolve_method(config, bernoulli);
  sweep_config.policy_method = method == EvaluationMethod::monte_carlo
                                   ? EvaluationMethod::monte_carlo
                                   : EvaluationMethod::value_iteration;
  sweep_config.intervals = config.grid_intervals;
  sweep_config.value_iteration = vi_options(config);
  sweep_config.simulation = simulation_options(config);
  // Cells run in parallel; paths within a cell stay on one thread.
  sweep_config.simulation.workers = 1;
  sweep_config.series_tol = config.tol;
  sweep_config.workers = config.workers;

  const auto reports = sweep(sweep_config);
  for (const auto& row : reports) {
    const std::string bad = row.invariant_violation();
    if (!bad.empty()) {
      err << "invariant failure at family=" << to_string(row.family)
          << " c=" << row.c << " p=" << row.p << " policy=" << row.policy
          << ": " << bad << '\n';
      return kExitInvariantFailure;
    }
  }

  if (config.format == OutputFormat::json) {
    json rows = json::array();
    for (const auto& row : reports) rows.push_back(report_json(row));
    emit(config.out, rows.dump(2) + "\n", out);
  } else {
    std::ostringstream s;
    write_csv(s, reports);
    emit(config.out, s.str(), out);
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.seed = config.seed;
  options.on_result = [&](const CheckResult& r) {
    out << (r.passed ? "PASS " : "FAIL ") << r.module << '/' << r.name << " ("
        << std::fixed << std::setprecision(2) << r.seconds << " s)"
        << std::defaultfloat << '\n';
    out.flush();
  };
  const auto results = run_invariant_suite(options);
  int failed = 0;
  const CheckResult* first = nullptr;
  for (const auto& r : results) {
    if (r.passed) continue;
    ++failed;
    if (first == nullptr) first = &r;
  }
  out << results.size() - failed << '/' << results.size() << " checks passed\n";
  if (first != nullptr) {
    err << "first counterexample (" << first->module << '/' << first->name
        << "): " << first->counterexample << '\n';
    return kExitInvariantFailure;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  const ParseResult parsed = parse_run_config(args);
  if (!parsed.config) {
    (parsed.exit_code == kExitOk ? out : err) << parsed.message;
    return parsed.exit_code;
  }
  const RunConfig& config = *parsed.config;
  try {
    switch (config.subcommand) {
      case Subcommand::curve:
        return cmd_curve(config, out, err);
      case Subcommand::evaluate:
        return cmd_evaluate(config, out, err);
      case Subcommand::sweep:
        return cmd_sweep(config, out, err);
      case Subcommand::verify:
        return cmd_verify(config, out, err);
    }
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << " (last span " << e.last_span() << ")\n";
    return kExitNonConvergence;
  } catch (const AdmissibilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvariantFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace ehpc::cli
