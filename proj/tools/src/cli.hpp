#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace invex2d::cli {

enum ExitCode : int {
  kPassed = 0,
  kViolated = 1,
  kErrorOrInconclusive = 2,
  kUsage = 64,
};

/// Runs one command line; args[0] is the program name. Reports go to
/// `out`, diagnostics and usage errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used as the input digest in reports.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace invex2d::cli
