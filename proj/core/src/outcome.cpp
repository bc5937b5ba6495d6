#include "sudoku/outcome.hpp"

namespace sudoku {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::solved:
      return "solved";
    case SolveStatus::timeout:
      return "timeout";
    case SolveStatus::unsolvable:
      return "unsolvable";
  }
  return "unknown";
}

}  // namespace sudoku
