#pragma once

#include <ostream>

namespace duosim {

// Exit codes of run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitAudit = 2;

/// Entry point of the `duosim` tool. Subcommands: run, audit, nash, tilde-b.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace duosim
