#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sudoku {

/// Box side length n. The grid side is d = n*n and the cell count is c = d*d.
class BoxOrder {
 public:
  static constexpr int kMin = 2;
  static constexpr int kMax = 8;  // d <= 64 so a candidate set fits one word

  explicit BoxOrder(int n);

  int box() const { return n_; }
  int side() const { return n_ * n_; }
  int cells() const { return side() * side(); }

  auto operator<=>(const BoxOrder&) const = default;

 private:
  int n_;
};

/// Candidate digits of one cell, stored as a bitmask (bit k-1 <=> digit k).
class ValueSet {
 public:
  using Mask = std::uint64_t;

  class iterator {
   public:
    using value_type = int;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(Mask rest) : rest_(rest) {}
    int operator*() const { return std::countr_zero(rest_) + 1; }
    iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) {
      auto tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(const iterator&) const = default;

   private:
    Mask rest_ = 0;
  };

  constexpr ValueSet() = default;
  constexpr explicit ValueSet(Mask bits) : bits_(bits) {}

  static constexpr ValueSet full(int side) {
    return ValueSet(side >= 64 ? ~Mask{0} : (Mask{1} << side) - 1);
  }
  static constexpr ValueSet single(int digit) { return ValueSet(Mask{1} << (digit - 1)); }

  constexpr Mask bits() const { return bits_; }
  constexpr bool contains(int digit) const { return (bits_ >> (digit - 1)) & 1U; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool fixed() const { return std::has_single_bit(bits_); }
  /// Lowest member; meaningful only when non-empty.
  constexpr int lowest() const { return std::countr_zero(bits_) + 1; }

  constexpr ValueSet without(int digit) const { return ValueSet(bits_ & ~(Mask{1} << (digit - 1))); }

  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }

  constexpr bool operator==(const ValueSet&) const = default;

 private:
  Mask bits_ = 0;
};

/// Unit and peer tables for one box order. Units are numbered rows [0, d),
/// columns [d, 2d), boxes [2d, 3d).
class Geometry {
 public:
  explicit Geometry(BoxOrder order);

  BoxOrder order() const { return order_; }
  int side() const { return order_.side(); }
  int cell_count() const { return order_.cells(); }
  int unit_count() const { return 3 * side(); }
  int peer_count() const { return peer_count_; }

  std::span<const int> unit(int u) const {
    return {unit_cells_.data() + static_cast<std::size_t>(u) * side(), static_cast<std::size_t>(side())};
  }
  const std::array<int, 3>& units_of(int cell) const { return cell_units_[cell]; }
  std::span<const int> peers(int cell) const {
    return {peer_cells_.data() + static_cast<std::size_t>(cell) * peer_count_,
            static_cast<std::size_t>(peer_count_)};
  }

  int row_of(int cell) const { return cell / side(); }
  int col_of(int cell) const { return cell % side(); }
  int box_of(int cell) const {
    const int n = order_.box();
    return (row_of(cell) / n) * n + col_of(cell) / n;
  }

 private:
  BoxOrder order_;
  int peer_count_ = 0;
  std::vector<int> unit_cells_;
  std::vector<std::array<int, 3>> cell_units_;
  std::vector<int> peer_cells_;
};

Geometry build_geometry(BoxOrder order);

/// Shared immutable geometry, built once per order.
const Geometry& geometry_for(BoxOrder order);

/// A grid of candidate sets plus the contradiction flag. Cells are indexed
/// row-major from 0. Copying a Board is a plain value copy.
class Board {
 public:
  /// Blank board: every cell holds the full set.
  explicit Board(BoxOrder order);

  BoxOrder order() const { return geom_->order(); }
  int side() const { return geom_->side(); }
  int cell_count() const { return geom_->cell_count(); }
  const Geometry& geometry() const { return *geom_; }

  ValueSet cell(int i) const { return cells_[static_cast<std::size_t>(i)]; }
  std::span<const ValueSet> cells() const { return cells_; }

  /// Overwrite a cell's candidates without propagating. Used for givens and
  /// for constructing test states.
  void set_candidates(int i, ValueSet values);

  /// Fix `cell` to `value` and propagate to a fixpoint. A value outside a
  /// non-singleton set throws std::invalid_argument; a value different from
  /// an already fixed cell raises the contradiction flag instead.
  void fix_value(int cell, int value);

  /// Propagate every currently fixed cell and rescan every unit.
  void initial_propagate();

  bool contradiction() const { return contradiction_; }
  int fixed_count() const { return fixed_; }

  /// When false, propagation keeps going after a candidate set empties; the
  /// emptied cells are simply left out of the fixed count.
  void set_stop_on_contradiction(bool stop) { stop_on_contradiction_ = stop; }
  bool stop_on_contradiction() const { return stop_on_contradiction_; }
  bool is_solved() const;

  /// Digit per cell, 0 where the cell is not fixed.
  std::vector<int> digits() const;

  bool operator==(const Board& other) const;

 private:
  struct Scratch;
  void run(Scratch& work);
  static Scratch& scratch(int cells, int units);

  const Geometry* geom_;
  std::vector<ValueSet> cells_;
  int fixed_ = 0;
  bool contradiction_ = false;
  bool stop_on_contradiction_ = true;
};

/// True when every unit of a fully fixed digit grid is a permutation of 1..d.
bool is_valid_solution(BoxOrder order, std::span<const int> digits);

/// True when `solution` is solved and agrees with every fixed cell of `instance`.
bool solves(const Board& instance, const Board& solution);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parse an instance of a known order. Order 3 takes one 81-character line
/// ('1'-'9', '.' or '0'); larger orders take an `order <n>` header followed by
/// c integer tokens with 0 for blank. No propagation is performed.
Board parse_instance(std::string_view text, BoxOrder order);

/// Parse with the order taken from the text. Besides the two formats above,
/// this accepts the legacy token layout `<n> <unused> v1 ... vc` with -1 for
/// blank cells.
Board parse_instance(std::string_view text);

Board load_instance(const std::string& path);

/// Writer for the instance format; unfixed cells are written as blanks.
std::string format_instance(const Board& board);

/// Boxed ASCII rendering for humans.
std::string format_pretty(const Board& board);

/// FNV-1a over the digit grid.
std::uint64_t grid_hash(const Board& board);

}  // namespace sudoku
