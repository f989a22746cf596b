#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace census::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;        // malformed config or flags
inline constexpr int kCheckFailed = 2;  // validation or verification failure
inline constexpr int kIncomplete = 3;   // non-exhaustive enumeration

// Subcommands: validate, enumerate, count, fit, ratio, plot, verify.
// Errors go to `err` as one-line JSON {"code": .., "message": ..}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace census::cli
