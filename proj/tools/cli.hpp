#pragma once

#include <iosfwd>

namespace pointres::cli {

/// Exit codes shared by all subcommands.
enum Exit : int { kOk = 0, kUsage = 1, kComputation = 2 };

/// Runs the command line `argv[1..argc)`. Results go to --out or `out`;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pointres::cli
