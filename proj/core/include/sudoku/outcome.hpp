#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>

#include "sudoku/board.hpp"

namespace sudoku {

using Seconds = std::chrono::duration<double>;

enum class SolveStatus { solved, timeout, unsolvable };

std::string_view to_string(SolveStatus status);

struct SolveLimits {
  Seconds timeout{5.0};
  /// Stop after this many search iterations (0 = no cap). Reported as timeout.
  std::uint64_t max_iterations = 0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::timeout;
  std::optional<Board> solution;  // set iff status == solved
  std::uint64_t iterations = 0;
  double elapsed_s = 0.0;

  bool solved() const { return status == SolveStatus::solved; }
};

}  // namespace sudoku
