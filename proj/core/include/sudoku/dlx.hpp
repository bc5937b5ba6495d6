#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "sudoku/acs.hpp"
#include "sudoku/board.hpp"
#include "sudoku/outcome.hpp"

namespace sudoku {

enum class Presolve { propagate, raw };

/// Exact-cover matrix of a Sudoku instance stored as toroidal doubly linked
/// lists. Columns are the four constraint families (cell filled, digit in
/// row, digit in column, digit in box); each row is one candidate
/// (cell, digit) and has exactly four nodes.
class CoverMatrix {
 public:
  /// Candidate rows come from the propagated candidate sets, or with
  /// Presolve::raw from the givens alone (digits used by a given peer are
  /// dropped). A contradictory board yields a matrix with no rows.
  static CoverMatrix from_board(const Board& board, Presolve mode = Presolve::propagate);

  BoxOrder order() const { return order_; }
  int column_count() const { return columns_; }
  int row_count() const { return static_cast<int>(rows_.size()); }
  int column_size(int column) const { return size_[static_cast<std::size_t>(column)]; }
  CellValue row_meta(int row) const { return rows_[static_cast<std::size_t>(row)]; }

  /// Hash of every link and counter; equal before and after a search.
  std::uint64_t checksum() const;

  /// Rows chosen by a cover, turned back into a board.
  Board decode(std::span<const int> cover) const;

 private:
  friend class CoverSearch;

  explicit CoverMatrix(BoxOrder order);
  void add_row(const std::array<int, 4>& columns, CellValue meta);

  BoxOrder order_;
  int columns_;
  // node 0 is the root, nodes 1..columns_ are column headers
  std::vector<int> left_, right_, up_, down_, column_, row_;
  std::vector<int> size_;
  std::vector<CellValue> rows_;
};

struct CoverSearchResult {
  std::vector<std::vector<int>> covers;  // row ids of each cover found
  std::size_t count = 0;
  bool truncated = false;  // stopped by the deadline, not by exhaustion or the cap
  std::uint64_t nodes = 0;
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

/// Algorithm X with dancing links and smallest-column branching. Stops after
/// `solution_cap` covers. The matrix is restored before returning.
CoverSearchResult dlx_search(CoverMatrix& matrix, std::size_t solution_cap, Seconds timeout,
                             bool keep_covers = true);

struct DlxResult {
  SolveOutcome outcome;
  double reduce_s = 0.0;
  double search_s = 0.0;
  std::uint64_t nodes = 0;
};

DlxResult solve_dlx(const Board& instance, const SolveLimits& limits, Presolve mode = Presolve::propagate);

/// Number of completions of `instance`, saturating at `cap` (cap >= 2).
std::size_t count_solutions(const Board& instance, std::size_t cap,
                            Seconds timeout = Seconds(std::numeric_limits<double>::infinity()));

}  // namespace sudoku
