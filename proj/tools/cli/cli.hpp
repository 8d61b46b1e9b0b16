#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fsa::cli {

enum ExitCode : int {
  kSuccess = 0,
  kRuntimeFailure = 1,
  kConfigError = 2,
  kValidationFailure = 3,
};

/// Entry point shared by the `fsa` binary and the tests. Tables go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// "first:last:step" (inclusive) or a comma-separated list.
std::vector<double> parse_list(std::string_view text);

}  // namespace fsa::cli
