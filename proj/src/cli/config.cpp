#include "ehpc/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehpc/arrivals.hpp"
#include "ehpc/evaluation.hpp"
#include "ehpc/policy.hpp"
#include "ehpc/reward.hpp"

namespace ehpc::cli {
namespace {

double parse_number(const std::string& token, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != token.size() || !std::isfinite(v)) {
    throw ConfigError("bad number '" + token + "' in " + context);
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::string to_string(Subcommand sub) {
  switch (sub) {
    case Subcommand::curve:
      return "curve";
    case Subcommand::evaluate:
      return "evaluate";
    case Subcommand::sweep:
      return "sweep";
    case Subcommand::verify:
      return "verify";
  }
  return "unknown";
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw ConfigError("empty grid");
  const auto parts = split(text, ':');
  if (parts.size() == 4 && (parts[0] == "linspace" || parts[0] == "logspace")) {
    const double lo = parse_number(parts[1], text);
    const double hi = parse_number(parts[2], text);
    const double count = parse_number(parts[3], text);
    if (count < 1 || count != std::floor(count)) {
      throw ConfigError("grid '" + text + "' needs a positive integer count");
    }
    const int n = static_cast<int>(count);
    const bool geometric = parts[0] == "logspace";
    if (geometric && !(lo > 0.0 && hi > 0.0)) {
      throw ConfigError("logspace grid '" + text + "' needs positive bounds");
    }
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      out.push_back(geometric ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
    }
    if (n > 1) out.back() = hi;
    return out;
  }
  std::vector<double> out;
  for (const auto& token : split(text, ',')) out.push_back(parse_number(token, text));
  return out;
}

ParseResult parse_run_config(const std::vector<std::string>& args) {
  RunConfig config;
  CLI::App app{"Maximin power control for energy-harvesting transmitters", "ehpc"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  std::string c_value, c_grid, p_grid, nmcr_grid, method, format;
  app.add_option("--reward", config.reward, "awgn:<gamma> or sqrt")
      ->capture_default_str();
  app.add_option("--family", config.family, "bernoulli, uniform or exponential")
      ->capture_default_str();
  app.add_option("--c", c_value, "battery capacity");
  app.add_option("--c-grid", c_grid, "capacity grid: a,b,c or linspace|logspace:lo:hi:n");
  app.add_option("--p", p_grid, "MCR value or grid");
  app.add_option("--nmcr", nmcr_grid, "nominal MCR value or grid");
  app.add_option("--policy", config.policy, "omega, phi or greedy")
      ->capture_default_str();
  app.add_option("--method", method, "series, mc or vi");
  app.add_option("--n", config.horizon, "Monte Carlo horizon per path")
      ->capture_default_str();
  app.add_option("--paths", config.paths, "Monte Carlo paths")->capture_default_str();
  app.add_option("--grid-N", config.grid_intervals, "value iteration grid intervals")
      ->capture_default_str();
  app.add_option("--eps", config.eps, "value iteration span threshold")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "master seed")->capture_default_str();
  app.add_option("--tol", config.tol, "series truncation tolerance")
      ->capture_default_str();
  app.add_option("--out", config.out, "output file (default: standard output)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--workers", config.workers, "worker threads")->capture_default_str();
  app.add_option("--x-max", config.x_max, "curve: largest battery level")
      ->capture_default_str();
  app.add_option("--samples", config.samples, "curve: number of x samples")
      ->capture_default_str();
  app.add_option("--endpoints-out", config.endpoints_out,
                 "curve: endpoint file (default: derived from --out)");

  app.add_subcommand("curve", "policy curves omega, phi and greedy with endpoints");
  app.add_subcommand("evaluate", "long-run average reward of one policy in one cell");
  app.add_subcommand("sweep", "gap and factor table over capacity and MCR grids");
  app.add_subcommand("verify", "run the invariant suites");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    ParseResult result;
    result.exit_code = code == 0 ? kExitOk : kExitConfigError;
    result.message = out.str() + err.str();
    return result;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      const std::string name = sub->get_name();
      if (name == "curve") config.subcommand = Subcommand::curve;
      if (name == "evaluate") config.subcommand = Subcommand::evaluate;
      if (name == "sweep") config.subcommand = Subcommand::sweep;
      if (name == "verify") config.subcommand = Subcommand::verify;
    }
    if (!c_value.empty() && !c_grid.empty()) {
      throw ConfigError("give either --c or --c-grid, not both");
    }
    if (!c_value.empty()) config.capacities = {parse_number(c_value, "--c")};
    if (!c_grid.empty()) config.capacities = parse_grid(c_grid);
    if (!p_grid.empty()) config.mcr = parse_grid(p_grid);
    if (!nmcr_grid.empty()) config.nmcr = parse_grid(nmcr_grid);
    if (!method.empty()) config.method = method;
    if (!format.empty()) {
      if (format == "csv") {
        config.format = OutputFormat::csv;
      } else if (format == "json") {
        config.format = OutputFormat::json;
      } else {
        throw ConfigError("unknown format '" + format + "' (expected csv or json)");
      }
    }
    validate(config);
  } catch (const std::exception& e) {
    ParseResult result;
    result.exit_code = kExitConfigError;
    result.message = std::string("error: ") + e.what() + "\n";
    return result;
  }
  ParseResult result;
  result.config = std::move(config);
  return result;
}

void validate(const RunConfig& config) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
  };
  positive(static_cast<double>(config.horizon), "--n");
  positive(config.paths, "--paths");
  positive(config.grid_intervals, "--grid-N");
  positive(config.eps, "--eps");
  positive(config.tol, "--tol");
  positive(config.workers, "--workers");
  positive(config.x_max, "--x-max");
  if (config.samples < 2) throw ConfigError("--samples must be >= 2");
  for (double c : config.capacities) positive(c, "capacity");

  try {
    parse_reward(config.reward);
    parse_family(config.family);
    parse_policy_choice(config.policy);
    if (config.method) parse_method(*config.method);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  auto in_unit = [](const std::vector<double>& grid, const char* name) {
    for (double v : grid) {
      if (!(v > 0.0 && v < 1.0)) {
        throw ConfigError(std::string(name) + " values must lie in (0, 1)");
      }
    }
  };
  in_unit(config.mcr, "--p");
  in_unit(config.nmcr, "--nmcr");

  const bool bernoulli =
      parse_family(config.family) == ArrivalDistribution::Family::bernoulli;
  switch (config.subcommand) {
    case Subcommand::verify:
      return;
    case Subcommand::curve:
      if (config.mcr.size() != 1 || !config.nmcr.empty()) {
        throw ConfigError("curve needs exactly one --p value");
      }
      return;
    case Subcommand::evaluate:
    case Subcommand::sweep:
      break;
  }
  if (config.mcr.empty() == config.nmcr.empty()) {
    throw ConfigError("give exactly one of --p and --nmcr");
  }
  if (bernoulli && !config.nmcr.empty()) {
    throw ConfigError("Bernoulli arrivals are parameterized by --p (MCR)");
  }
  if (config.subcommand == Subcommand::evaluate) {
    if (config.capacities.size() != 1 || config.mcr.size() + config.nmcr.size() != 1) {
      throw ConfigError("evaluate needs a single capacity and a single p or nmcr");
    }
    if (config.method && parse_method(*config.method) ==
                             EvaluationMethod::bernoulli_series && !bernoulli) {
      throw ConfigError("method series needs Bernoulli arrivals");
    }
  }
  if (config.subcommand == Subcommand::sweep && config.method &&
      parse_method(*config.method) == EvaluationMethod::bernoulli_series &&
      !bernoulli) {
    throw ConfigError("method series needs Bernoulli arrivals");
  }
}

}  // namespace ehpc::cli
