#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace schwartz::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNotSolvable = 2,
  kVerifyFailed = 3,
};

/// Entry point behind the `schwartz` executable; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schwartz::cli
