#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topokernel::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kDataDirEnv = "TOPOKERNEL_DATA_DIR";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsageError = 2;

// Runs the command line `args` (args[0] is the program name). Human-oriented
// summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace topokernel::cli
