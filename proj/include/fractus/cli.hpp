#pragma once

#include <ostream>

namespace fractus::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kNoSolution = 2, kInputError = 3, kNoConvergence = 4 };

/// Runs one command (check, solve, fundamental, green, dump). Never throws;
/// the return value is always one of ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fractus::cli
