#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace otc::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `otcoarsen` invocation. `args` excludes the program name.
/// Returns the process exit code; messages go to `out` and `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace otc::cli
