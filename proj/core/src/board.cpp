#include "sudoku/board.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

namespace sudoku {

BoxOrder::BoxOrder(int n) : n_(n) {
  if (n < kMin || n > kMax) {
    throw std::invalid_argument("box order must be in [" + std::to_string(kMin) + ", " +
                                std::to_string(kMax) + "], got " + std::to_string(n));
  }
}

Geometry::Geometry(BoxOrder order) : order_(order) {
  const int d = order.side();
  const int n = order.box();
  const int c = order.cells();

  unit_cells_.resize(static_cast<std::size_t>(3 * d) * d);
  cell_units_.resize(static_cast<std::size_t>(c));
  std::vector<int> fill(static_cast<std::size_t>(3 * d), 0);
  for (int i = 0; i < c; ++i) {
    const int r = i / d;
    const int col = i % d;
    const int b = (r / n) * n + col / n;
    cell_units_[i] = {r, d + col, 2 * d + b};
    for (int u : cell_units_[i]) {
      unit_cells_[static_cast<std::size_t>(u) * d + fill[u]++] = i;
    }
  }

  peer_count_ = 3 * (d - 1) - 2 * (n - 1);
  peer_cells_.reserve(static_cast<std::size_t>(c) * peer_count_);
  std::vector<int> seen(static_cast<std::size_t>(c), -1);
  for (int i = 0; i < c; ++i) {
    for (int u : cell_units_[i]) {
      for (int j : unit(u)) {
        if (j != i && seen[j] != i) {
          seen[j] = i;
          peer_cells_.push_back(j);
        }
      }
    }
    std::sort(peer_cells_.end() - peer_count_, peer_cells_.end());
  }
}

Geometry build_geometry(BoxOrder order) { return Geometry(order); }

const Geometry& geometry_for(BoxOrder order) {
  static std::mutex mu;
  static std::array<std::unique_ptr<const Geometry>, BoxOrder::kMax + 1> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[static_cast<std::size_t>(order.box())];
  if (!slot) slot = std::make_unique<const Geometry>(order);
  return *slot;
}

// Work lists for one propagation run. Cells on `fixes` are singletons whose
// digit still has to be removed from their peers; `dirty` holds units that
// lost a candidate and must be rescanned for hidden singles.
struct Board::Scratch {
  std::vector<int> fixes;
  std::vector<int> dirty;
  std::vector<char> queued;

  void mark(const std::array<int, 3>& units) {
    for (int u : units) {
      if (!queued[u]) {
        queued[u] = 1;
        dirty.push_back(u);
      }
    }
  }
  void clear() {
    fixes.clear();
    for (int u : dirty) queued[u] = 0;
    dirty.clear();
  }
};

Board::Scratch& Board::scratch(int cells, int units) {
  thread_local Scratch work;
  if (work.queued.size() < static_cast<std::size_t>(units)) work.queued.resize(units, 0);
  work.fixes.reserve(static_cast<std::size_t>(cells));
  work.clear();
  return work;
}

Board::Board(BoxOrder order)
    : geom_(&geometry_for(order)),
      cells_(static_cast<std::size_t>(order.cells()), ValueSet::full(order.side())) {}

void Board::set_candidates(int i, ValueSet values) {
  const ValueSet before = cells_[i];
  cells_[i] = values;
  fixed_ += static_cast<int>(values.fixed()) - static_cast<int>(before.fixed());
  if (values.empty()) contradiction_ = true;
}

void Board::fix_value(int cell, int value) {
  const ValueSet current = cells_[cell];
  const ValueSet target = ValueSet::single(value);
  if (!current.contains(value)) {
    if (current.fixed() || current.empty()) {
      contradiction_ = true;
      return;
    }
    throw std::invalid_argument("digit " + std::to_string(value) + " is not a candidate of cell " +
                                std::to_string(cell));
  }
  if (current != target) {
    cells_[cell] = target;
    ++fixed_;
  }

  Scratch& work = scratch(cell_count(), geom_->unit_count());
  work.fixes.push_back(cell);
  work.mark(geom_->units_of(cell));
  run(work);
}

void Board::initial_propagate() {
  if (contradiction_) return;
  Scratch& work = scratch(cell_count(), geom_->unit_count());
  for (int i = 0; i < cell_count(); ++i) {
    if (cells_[i].fixed()) work.fixes.push_back(i);
  }
  for (int u = 0; u < geom_->unit_count(); ++u) {
    work.queued[u] = 1;
    work.dirty.push_back(u);
  }
  run(work);
}

void Board::run(Scratch& work) {
  // Rule 1 drains first; a unit is scanned for hidden singles (rule 2) only
  // once no eliminations are pending.
  for (;;) {
    while (!work.fixes.empty()) {
      const int i = work.fixes.back();
      work.fixes.pop_back();
      const ValueSet::Mask digit = cells_[i].bits();
      for (int j : geom_->peers(i)) {
        const ValueSet::Mask before = cells_[j].bits();
        if ((before & digit) == 0) continue;
        const ValueSet after(before & ~digit);
        cells_[j] = after;
        if (after.empty()) {
          // a fixed peer held the same digit
          --fixed_;
          contradiction_ = true;
          if (stop_on_contradiction_) {
            work.clear();
            return;
          }
          continue;
        }
        if (after.fixed()) {
          ++fixed_;
          work.fixes.push_back(j);
        }
        work.mark(geom_->units_of(j));
      }
    }
    if (work.dirty.empty()) return;

    const int u = work.dirty.back();
    work.dirty.pop_back();
    work.queued[u] = 0;

    const auto cells = geom_->unit(u);
    ValueSet::Mask once = 0;
    ValueSet::Mask twice = 0;
    for (int k : cells) {
      const ValueSet::Mask s = cells_[k].bits();
      twice |= once & s;
      once |= s;
    }
    const ValueSet::Mask hidden = once & ~twice;
    if (hidden == 0) continue;
    for (int k : cells) {
      const ValueSet s = cells_[k];
      const ValueSet::Mask h = s.bits() & hidden;
      if (h == 0 || s.fixed()) continue;
      cells_[k] = ValueSet(h & (~h + 1));
      ++fixed_;
      work.fixes.push_back(k);
      work.mark(geom_->units_of(k));
    }
  }
}

bool Board::is_solved() const {
  if (contradiction_ || fixed_ != cell_count()) return false;
  const ValueSet all = ValueSet::full(side());
  for (int u = 0; u < geom_->unit_count(); ++u) {
    ValueSet::Mask seen = 0;
    for (int k : geom_->unit(u)) {
      const ValueSet s = cells_[k];
      if (!s.fixed()) return false;
      seen |= s.bits();
    }
    if (seen != all.bits()) return false;
  }
  return true;
}

std::vector<int> Board::digits() const {
  std::vector<int> out(cells_.size(), 0);
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].fixed()) out[i] = cells_[i].lowest();
  }
  return out;
}

bool Board::operator==(const Board& other) const {
  return order() == other.order() && contradiction_ == other.contradiction_ && cells_ == other.cells_;
}

bool is_valid_solution(BoxOrder order, std::span<const int> digits) {
  const Geometry& g = geometry_for(order);
  if (digits.size() != static_cast<std::size_t>(g.cell_count())) return false;
  const ValueSet all = ValueSet::full(g.side());
  for (int u = 0; u < g.unit_count(); ++u) {
    ValueSet::Mask seen = 0;
    for (int k : g.unit(u)) {
      const int v = digits[k];
      if (v < 1 || v > g.side()) return false;
      seen |= ValueSet::single(v).bits();
    }
    if (seen != all.bits()) return false;
  }
  return true;
}

bool solves(const Board& instance, const Board& solution) {
  if (instance.order() != solution.order() || !solution.is_solved()) return false;
  for (int i = 0; i < instance.cell_count(); ++i) {
    const ValueSet given = instance.cell(i);
    if (given.fixed() && given != solution.cell(i)) return false;
  }
  return true;
}

namespace {

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r'; }

struct Token {
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back({text.substr(start, i - start), start});
  }
  return out;
}

int to_int(const Token& tok) {
  int value = 0;
  const auto* first = tok.text.data();
  const auto* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("expected an integer, got '" + std::string(tok.text) + "'", tok.offset);
  }
  return value;
}

void place_given(Board& board, int cell, int value, std::size_t position) {
  if (value < 1 || value > board.side()) {
    throw ParseError("value " + std::to_string(value) + " out of range 1.." + std::to_string(board.side()),
                     position);
  }
  board.set_candidates(cell, ValueSet::single(value));
}

Board parse_order3_line(std::string_view line, std::size_t base) {
  const BoxOrder order(3);
  if (line.size() != static_cast<std::size_t>(order.cells())) {
    throw ParseError("expected " + std::to_string(order.cells()) + " characters, got " +
                         std::to_string(line.size()),
                     base + std::min(line.size(), static_cast<std::size_t>(order.cells())));
  }
  Board board(order);
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (ch == '.' || ch == '0') continue;
    if (ch < '1' || ch > '9') {
      throw ParseError(std::string("unexpected character '") + ch + "'", base + i);
    }
    place_given(board, static_cast<int>(i), ch - '0', base + i);
  }
  return board;
}

Board parse_tokens(std::span<const Token> cells, BoxOrder order, int blank, std::size_t end) {
  const auto c = static_cast<std::size_t>(order.cells());
  if (cells.size() != c) {
    const std::size_t at = cells.size() > c ? cells[c].offset : end;
    throw ParseError("expected " + std::to_string(c) + " cell values, got " + std::to_string(cells.size()), at);
  }
  Board board(order);
  for (std::size_t i = 0; i < c; ++i) {
    const int v = to_int(cells[i]);
    if (v == blank) continue;
    place_given(board, static_cast<int>(i), v, cells[i].offset);
  }
  return board;
}

Board parse_with_header(std::span<const Token> tokens, std::size_t end, const BoxOrder* expected) {
  if (tokens.size() < 2) throw ParseError("missing order after header", end);
  const int n = to_int(tokens[1]);
  if (n < BoxOrder::kMin || n > BoxOrder::kMax) throw ParseError("unsupported order", tokens[1].offset);
  const BoxOrder order(n);
  if (expected != nullptr && *expected != order) {
    throw ParseError("header declares order " + std::to_string(n) + ", expected " +
                         std::to_string(expected->box()),
                     tokens[1].offset);
  }
  return parse_tokens(tokens.subspan(2), order, 0, end);
}

}  // namespace

Board parse_instance(std::string_view text, BoxOrder order) {
  const auto tokens = tokenize(text);
  if (order.box() == 3) {
    if (tokens.size() != 1) {
      throw ParseError("order 3 instances are a single line of 81 characters",
                       tokens.size() > 1 ? tokens[1].offset : 0);
    }
    return parse_order3_line(tokens[0].text, tokens[0].offset);
  }
  if (tokens.empty() || tokens[0].text != "order") {
    throw ParseError("expected header 'order <n>'", tokens.empty() ? 0 : tokens[0].offset);
  }
  return parse_with_header(tokens, text.size(), &order);
}

Board parse_instance(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw ParseError("empty instance", 0);
  if (tokens[0].text == "order") return parse_with_header(tokens, text.size(), nullptr);
  if (tokens.size() == 1) return parse_order3_line(tokens[0].text, tokens[0].offset);

  // legacy layout: order, an unused integer, then c values with -1 for blank
  const int n = to_int(tokens[0]);
  if (n < BoxOrder::kMin || n > BoxOrder::kMax) throw ParseError("unsupported order", tokens[0].offset);
  return parse_tokens(std::span(tokens).subspan(2), BoxOrder(n), -1, text.size());
}

Board load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_instance(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.position());
  }
}

std::string format_instance(const Board& board) {
  std::string out;
  const auto digits = board.digits();
  if (board.order().box() == 3) {
    out.reserve(digits.size() + 1);
    for (int v : digits) out.push_back(v == 0 ? '.' : static_cast<char>('0' + v));
    out.push_back('\n');
    return out;
  }
  const int d = board.side();
  out = "order " + std::to_string(board.order().box()) + "\n";
  for (int r = 0; r < d; ++r) {
    for (int col = 0; col < d; ++col) {
      if (col > 0) out.push_back(' ');
      out += std::to_string(digits[static_cast<std::size_t>(r) * d + col]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string format_pretty(const Board& board) {
  const int d = board.side();
  const int n = board.order().box();
  const int width = d < 10 ? 1 : 2;
  const auto digits = board.digits();

  std::string rule = "+";
  for (int b = 0; b < n; ++b) rule += std::string(static_cast<std::size_t>(n * (width + 1) + 1), '-') + "+";
  rule += "\n";

  std::string out = rule;
  for (int r = 0; r < d; ++r) {
    out += "|";
    for (int col = 0; col < d; ++col) {
      const int v = digits[static_cast<std::size_t>(r) * d + col];
      std::string cell = v == 0 ? "." : std::to_string(v);
      out += " " + std::string(static_cast<std::size_t>(width) - cell.size(), ' ') + cell;
      if ((col + 1) % n == 0) out += " |";
    }
    out += "\n";
    if ((r + 1) % n == 0) out += rule;
  }
  return out;
}

std::uint64_t grid_hash(const Board& board) {
  std::uint64_t h = 1469598103934665603ULL;
  for (int v : board.digits()) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace sudoku
