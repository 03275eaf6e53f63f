#pragma once

#include <string>
#include <vector>

namespace ogn::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kMetricUndefined = 3,
};

/// Entry point behind the `ogn` binary. args[0] is the program name.
int run(const std::vector<std::string>& args);

}  // namespace ogn::cli
