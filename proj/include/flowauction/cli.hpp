#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flowauction::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 1,
  kVerificationFailed = 2,
  kBudgetExceeded = 3,
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace flowauction::cli
