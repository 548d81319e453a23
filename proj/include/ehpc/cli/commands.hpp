#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ehpc/cli/config.hpp"

namespace ehpc::cli {

/// Columns x,omega,phi,greedy on [0, x_max]; the segment endpoints (k,x,y)
/// go to a second file.
int cmd_curve(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One evaluation record (JSON by default).
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Gap and factor rows for omega and phi over the capacity x parameter grid.
/// Nothing is written if any row breaks the report invariants.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs the invariant suites; prints the first counterexample on failure.
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses `args` (without the program name), dispatches, and maps errors to
/// exit codes: 1 config, 2 non-convergence, 3 invariant failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ehpc::cli
