#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fiflab::cli {

// Exit-code contract of the fiflab command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCounterexamples = 3;
inline constexpr int kExitDataInvalid = 4;
inline constexpr int kExitReproductionFailed = 5;

/// Runs one fiflab command. `args` excludes the program name. Standard output
/// content is buffered and written to `out` once, at the end.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fiflab::cli
