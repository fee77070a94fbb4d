#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aftsynth {

enum ExitCode : int { kExitResult = 0, kExitInput = 1, kExitInternal = 2, kExitEmpty = 3, kExitMismatch = 4 };

/// Runs one command line (without the program name); returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Log level from AFTSYNTH_LOG (trace, debug, info, warn, error, off); warn by default.
void configure_logging();

}  // namespace aftsynth
