#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bathsim::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kConfig = 2,
  kRunInvalid = 3,
  kNotExceeded = 4,  // compare: run A's layer deviation does not exceed run B's
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bathsim::cli
