#include "sudoku/backtrack.hpp"

#include <vector>

namespace sudoku {
namespace {

int pick_mrv_cell(const Board& board) {
  int best = -1;
  int best_size = 0;
  for (int i = 0; i < board.cell_count(); ++i) {
    const int size = board.cell(i).size();
    if (size <= 1) continue;
    if (best < 0 || size < best_size) {
      best = i;
      best_size = size;
      if (size == 2) break;
    }
  }
  return best;
}

struct Frame {
  Board board;
  int cell;
  ValueSet untried;
};

}  // namespace

BacktrackResult solve_backtracking(const Board& instance, const SolveLimits& limits) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(limits.timeout);

  BacktrackResult result;
  auto finish = [&](SolveStatus status) {
    result.outcome.status = status;
    result.outcome.iterations = result.stats.nodes_expanded;
    result.stats.elapsed_s = Seconds(Clock::now() - start).count();
    result.outcome.elapsed_s = result.stats.elapsed_s;
    return result;
  };

  Board root = instance;
  root.initial_propagate();
  if (root.contradiction()) return finish(SolveStatus::unsolvable);
  if (root.is_solved()) {
    result.outcome.solution = std::move(root);
    return finish(SolveStatus::solved);
  }

  std::vector<Frame> stack;
  const int root_cell = pick_mrv_cell(root);
  const ValueSet root_values = root.cell(root_cell);
  stack.push_back({std::move(root), root_cell, root_values});

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.untried.empty()) {
      stack.pop_back();
      continue;
    }
    const int digit = top.untried.lowest();
    top.untried = top.untried.without(digit);

    Board child = top.board;
    const int cell = top.cell;
    child.fix_value(cell, digit);
    ++result.stats.nodes_expanded;

    if ((result.stats.nodes_expanded & 0xFF) == 0) {
      if (Clock::now() >= deadline) return finish(SolveStatus::timeout);
    }
    if (limits.max_iterations != 0 && result.stats.nodes_expanded >= limits.max_iterations) {
      return finish(SolveStatus::timeout);
    }

    if (child.contradiction()) continue;
    if (child.fixed_count() == child.cell_count()) {
      if (!child.is_solved()) continue;
      result.outcome.solution = std::move(child);
      return finish(SolveStatus::solved);
    }
    const int next = pick_mrv_cell(child);
    const ValueSet values = child.cell(next);
    stack.push_back({std::move(child), next, values});
    if (stack.size() - 1 > result.stats.max_depth) result.stats.max_depth = stack.size() - 1;
  }
  return finish(SolveStatus::unsolvable);
}

}  // namespace sudoku
