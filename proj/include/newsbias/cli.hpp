#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace newsbias {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitData = 4,
  kExitNetwork = 5,
  kExitState = 6,
};

/// Entry point of the `newsbias` tool. `args` excludes the program name.
/// Errors are reported on `err` as one line: `error: <Code>: <message>`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace newsbias
