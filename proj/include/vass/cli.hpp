#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace vass {

enum ExitCode : int { kExitYes = 0, kExitNo = 1, kExitUnknown = 2, kExitInput = 3, kExitUnsupported = 4 };

/// Runs the command line (args exclude the program name).  The report goes to out,
/// human-oriented diagnostics to err.  Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a hash, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace vass
