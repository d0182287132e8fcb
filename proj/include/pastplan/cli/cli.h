#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pastplan::cli {

enum ExitCode {
  kOk = 0,
  kInputError = 1,  // unreadable file, parse error, bad flags
  kCompileError = 2,
  kUnsolvable = 3,
  kResourceLimit = 4,
  kValidationFailure = 5,
};

/// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace pastplan::cli
