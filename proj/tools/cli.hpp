#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fusegrow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name). Diagnostics go to
/// `err`, reports and summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fusegrow::cli
