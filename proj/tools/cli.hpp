#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smp::cli {

enum ExitCode { kOk = 0, kUsage = 1, kNumerical = 2, kGoldenMismatch = 3 };

/// Runs one command; argv[0] is the program name. Output goes to out,
/// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smp::cli
