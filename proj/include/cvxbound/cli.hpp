#pragma once

// Command-line entry point: subcommands bounds, verify, common-info, table.
// Exit codes: 0 success, 1 property failure, 2 invalid input, 3 unverified
// condition.

#include <ostream>

namespace cvxbound {

enum ExitCode : int { kExitOk = 0, kExitPropertyFailure = 1, kExitInvalidInput = 2, kExitUnverified = 3 };

/// Environment variable supplying the default seed.
inline constexpr const char* kSeedEnv = "CVXBOUND_SEED";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvxbound
