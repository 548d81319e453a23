#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ehpc {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  /// First counterexample found, empty on success.
  std::string counterexample;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20200607;
  /// Called after each check, e.g. for progress output.
  std::function<void(const CheckResult&)> on_result;
};

/// Runs the property checks of every module (reward calculus, policies,
/// arrival families, evaluators, metrics) and returns one result per check.
std::vector<CheckResult> run_invariant_suite(const VerifyOptions& options = {});

}  // namespace ehpc
