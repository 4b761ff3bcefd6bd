#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gnbp::cli {

/// Exit codes: 0 success, 2 usage or validation error, 1 runtime failure.
inline constexpr int kOk = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsageError = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience for tests: args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gnbp::cli
