#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace degen {

/// Runs the command-line interface on the given arguments (without argv[0])
/// and returns the process exit code. Split out from main() so tests can
/// drive the CLI in-process.
///
/// Exit codes: 0 success/converged, 1 max_iter or a failed experiment run,
/// 2 input or configuration error, 3 subproblem/identification failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace degen
