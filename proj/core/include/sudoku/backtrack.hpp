#pragma once

#include <cstdint>

#include "sudoku/board.hpp"
#include "sudoku/outcome.hpp"

namespace sudoku {

struct SearchStats {
  std::uint64_t nodes_expanded = 0;  // digit trials, each a fix with propagation
  std::uint64_t max_depth = 0;
  double elapsed_s = 0.0;
};

struct BacktrackResult {
  SolveOutcome outcome;
  SearchStats stats;
};

/// Depth-first search over the shared propagation core: branch on the unfixed
/// cell with the fewest candidates (lowest index on ties) and try its digits
/// in ascending order. Deterministic.
BacktrackResult solve_backtracking(const Board& instance, const SolveLimits& limits);

}  // namespace sudoku
