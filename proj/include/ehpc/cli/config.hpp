#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitInvariantFailure = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand { curve, evaluate, sweep, verify };
enum class OutputFormat { csv, json };

std::string to_string(Subcommand sub);

struct RunConfig {
  Subcommand subcommand = Subcommand::verify;
  std::string reward = "awgn:1";
  std::string family = "bernoulli";
  std::vector<double> capacities{1.0};
  std::vector<double> mcr;   // --p
  std::vector<double> nmcr;  // --nmcr
  std::string policy = "omega";
  /// series, mc or vi; unset means series for Bernoulli and vi otherwise.
  std::optional<std::string> method;
  long horizon = 100'000;  // --n
  int paths = 64;
  int grid_intervals = 500;  // --grid-N
  double eps = 1e-9;
  std::uint64_t seed = 1;
  double tol = 1e-15;
  std::string out;  // empty: standard output
  std::optional<OutputFormat> format;
  int workers = 1;
  double x_max = 8.0;
  int samples = 801;
  std::string endpoints_out;  // curve only
};

/// Parses a grid: "a,b,c", "linspace:lo:hi:n" or "logspace:lo:hi:n"
/// (geometric spacing between lo and hi).
std::vector<double> parse_grid(const std::string& text);

/// Outcome of parsing argv. When `config` is empty the caller should exit
/// with `exit_code` after printing `message` (help text or an error).
struct ParseResult {
  std::optional<RunConfig> config;
  int exit_code = kExitOk;
  std::string message;
};

/// Flags override values read from `--config <file>` (key=value per line,
/// keys are the long flag names without dashes).
ParseResult parse_run_config(const std::vector<std::string>& args);

/// Checks knob ranges and the p / nmcr exclusivity. Throws ConfigError.
void validate(const RunConfig& config);

}  // namespace ehpc::cli
