#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pmerge::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kUsage = 1;        // bad flags or values
constexpr int kInvalidInput = 2; // unreadable or invalid logs
constexpr int kFinalsChanged = 3; // metrics: finals differ from the baseline

// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace pmerge::cli
