#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sudoku/outcome.hpp"

namespace sudoku::cli {

enum ExitCode : int {
  kOk = 0,
  kSolverFailure = 1,  // timeout or unsolvable
  kUsage = 2,          // bad flags, unreadable or malformed input
};

/// "5", "5s", "250ms", "2m" -> seconds. Throws std::invalid_argument.
Seconds parse_duration(std::string_view text);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sudoku::cli
