#include "sudoku/dlx.hpp"

#include <cmath>
#include <stdexcept>

namespace sudoku {

CoverMatrix::CoverMatrix(BoxOrder order) : order_(order), columns_(4 * order.cells()) {
  const auto headers = static_cast<std::size_t>(columns_) + 1;
  left_.resize(headers);
  right_.resize(headers);
  up_.resize(headers);
  down_.resize(headers);
  column_.resize(headers);
  row_.assign(headers, -1);
  size_.assign(static_cast<std::size_t>(columns_), 0);
  for (int h = 0; h <= columns_; ++h) {
    left_[h] = h == 0 ? columns_ : h - 1;
    right_[h] = h == columns_ ? 0 : h + 1;
    up_[h] = h;
    down_[h] = h;
    column_[h] = h;
  }
}

void CoverMatrix::add_row(const std::array<int, 4>& columns, CellValue meta) {
  const int row = static_cast<int>(rows_.size());
  rows_.push_back(meta);
  const int first = static_cast<int>(left_.size());
  for (int k = 0; k < 4; ++k) {
    const int node = first + k;
    const int header = columns[k] + 1;
    left_.push_back(k == 0 ? first + 3 : node - 1);
    right_.push_back(k == 3 ? first : node + 1);
    up_.push_back(up_[header]);
    down_.push_back(header);
    down_[up_[header]] = node;
    up_[header] = node;
    column_.push_back(header);
    row_.push_back(row);
    ++size_[static_cast<std::size_t>(columns[k])];
  }
}

CoverMatrix CoverMatrix::from_board(const Board& board, Presolve mode) {
  const BoxOrder order = board.order();
  const Geometry& g = board.geometry();
  const int c = order.cells();
  const int d = order.side();
  CoverMatrix m(order);
  if (board.contradiction()) return m;

  std::vector<ValueSet> candidates(board.cells().begin(), board.cells().end());
  if (mode == Presolve::propagate) {
    Board work = board;
    work.initial_propagate();
    if (work.contradiction()) return m;
    candidates.assign(work.cells().begin(), work.cells().end());
  } else {
    for (int i = 0; i < c; ++i) {
      if (candidates[i].fixed()) continue;
      ValueSet::Mask used = 0;
      for (int j : g.peers(i)) {
        if (board.cell(j).fixed()) used |= board.cell(j).bits();
      }
      candidates[i] = ValueSet(candidates[i].bits() & ~used);
    }
  }

  for (int i = 0; i < c; ++i) {
    const int r = g.row_of(i);
    const int col = g.col_of(i);
    const int b = g.box_of(i);
    for (int v : candidates[i]) {
      m.add_row({i, c + r * d + (v - 1), 2 * c + col * d + (v - 1), 3 * c + b * d + (v - 1)}, {i, v});
    }
  }
  return m;
}

std::uint64_t CoverMatrix::checksum() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::vector<int>& xs) {
    for (int x : xs) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x));
      h *= 1099511628211ULL;
    }
  };
  mix(left_);
  mix(right_);
  mix(up_);
  mix(down_);
  mix(column_);
  mix(size_);
  return h;
}

Board CoverMatrix::decode(std::span<const int> cover) const {
  Board out(order_);
  for (int row : cover) {
    const CellValue cv = rows_[static_cast<std::size_t>(row)];
    out.set_candidates(cv.cell, ValueSet::single(cv.digit));
  }
  return out;
}

class CoverSearch {
 public:
  using Clock = std::chrono::steady_clock;

  CoverSearch(CoverMatrix& m, std::size_t cap, Seconds timeout, bool keep)
      : m_(m), cap_(cap), keep_(keep) {
    if (std::isfinite(timeout.count()) && timeout.count() < 1e9) {
      deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(timeout);
      has_deadline_ = true;
    }
  }

  CoverSearchResult run() {
    search();
    return std::move(result_);
  }

 private:
  void cover(int c) {
    m_.right_[m_.left_[c]] = m_.right_[c];
    m_.left_[m_.right_[c]] = m_.left_[c];
    for (int i = m_.down_[c]; i != c; i = m_.down_[i]) {
      for (int j = m_.right_[i]; j != i; j = m_.right_[j]) {
        m_.down_[m_.up_[j]] = m_.down_[j];
        m_.up_[m_.down_[j]] = m_.up_[j];
        --m_.size_[m_.column_[j] - 1];
      }
    }
  }

  void uncover(int c) {
    for (int i = m_.up_[c]; i != c; i = m_.up_[i]) {
      for (int j = m_.left_[i]; j != i; j = m_.left_[j]) {
        ++m_.size_[m_.column_[j] - 1];
        m_.down_[m_.up_[j]] = j;
        m_.up_[m_.down_[j]] = j;
      }
    }
    m_.right_[m_.left_[c]] = c;
    m_.left_[m_.right_[c]] = c;
  }

  // Returns true when the search must stop (cap reached or deadline passed).
  bool search() {
    if (m_.right_[0] == 0) {
      ++result_.count;
      if (keep_) result_.covers.push_back(partial_);
      return result_.count >= cap_;
    }
    if (has_deadline_ && (++polls_ & 0x3FF) == 0 && Clock::now() >= deadline_) {
      result_.truncated = true;
      return true;
    }

    int chosen = m_.right_[0];
    int smallest = m_.size_[chosen - 1];
    for (int h = m_.right_[chosen]; h != 0 && smallest > 0; h = m_.right_[h]) {
      if (m_.size_[h - 1] < smallest) {
        chosen = h;
        smallest = m_.size_[h - 1];
      }
    }
    if (smallest == 0) return false;

    cover(chosen);
    bool stop = false;
    for (int r = m_.down_[chosen]; r != chosen && !stop; r = m_.down_[r]) {
      ++result_.nodes;
      partial_.push_back(m_.row_[r]);
      for (int j = m_.right_[r]; j != r; j = m_.right_[j]) cover(m_.column_[j]);
      stop = search();
      for (int j = m_.left_[r]; j != r; j = m_.left_[j]) uncover(m_.column_[j]);
      partial_.pop_back();
    }
    uncover(chosen);
    return stop;
  }

  CoverMatrix& m_;
  std::size_t cap_;
  bool keep_;
  bool has_deadline_ = false;
  Clock::time_point deadline_{};
  std::uint64_t polls_ = 0;
  std::vector<int> partial_;
  CoverSearchResult result_;
};

CoverSearchResult dlx_search(CoverMatrix& matrix, std::size_t solution_cap, Seconds timeout, bool keep_covers) {
  if (solution_cap < 1) throw std::invalid_argument("solution cap must be at least 1");
  return CoverSearch(matrix, solution_cap, timeout, keep_covers).run();
}

DlxResult solve_dlx(const Board& instance, const SolveLimits& limits, Presolve mode) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  DlxResult result;

  CoverMatrix matrix = CoverMatrix::from_board(instance, mode);
  const auto reduced = Clock::now();
  result.reduce_s = Seconds(reduced - start).count();

  const Seconds remaining = limits.timeout - Seconds(reduced - start);
  CoverSearchResult found = dlx_search(matrix, 1, remaining > Seconds(0) ? remaining : Seconds(0));
  result.nodes = found.nodes;
  result.outcome.iterations = found.nodes;

  if (!found.covers.empty()) {
    Board solution = matrix.decode(found.covers.front());
    if (!solves(instance, solution)) throw std::logic_error("exact cover decodes to an invalid grid");
    result.outcome.status = SolveStatus::solved;
    result.outcome.solution = std::move(solution);
  } else {
    result.outcome.status = found.truncated ? SolveStatus::timeout : SolveStatus::unsolvable;
  }
  const auto end = Clock::now();
  result.search_s = Seconds(end - reduced).count();
  result.outcome.elapsed_s = Seconds(end - start).count();
  return result;
}

std::size_t count_solutions(const Board& instance, std::size_t cap, Seconds timeout) {
  if (cap < 2) throw std::invalid_argument("count_solutions needs a cap of at least 2");
  CoverMatrix matrix = CoverMatrix::from_board(instance);
  return dlx_search(matrix, cap, timeout, false).count;
}

}  // namespace sudoku
