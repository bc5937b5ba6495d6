#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sudoku/board.hpp"
#include "sudoku/outcome.hpp"

namespace sudoku {

using Rng = std::mt19937_64;

/// Which solution the global update reinforces.
enum class BestMode {
  stored,     // the solution that set the current best deposit, kept until displaced
  iteration,  // the best ant of the current iteration
};

struct ColonyParams {
  int ants = 10;
  double rho = 0.9;
  double q0 = 0.9;
  double xi = 0.1;
  double bve_rate = 0.005;
  std::optional<double> tau0;  // 1/c when unset
  /// Take the greedy branch when q > q0 instead of q < q0.
  bool eq3_literal = false;
  BestMode best_mode = BestMode::stored;
  /// When set, an ant stops choosing once its board holds an empty candidate
  /// set. By default it keeps filling the remaining cells, and emptied cells
  /// simply do not count toward f.
  bool stop_on_contradiction = false;

  double initial_pheromone(int cells) const { return tau0.value_or(1.0 / cells); }

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

/// Apply one `key=value` override (keys as on the command line: m, rho, q0,
/// xi, f-bve, tau0, eq3-literal, best-mode, ant-stop-on-contradiction).
/// Unknown keys throw.
void apply_param(ColonyParams& params, std::string_view key, std::string_view value);

/// Pheromone level per (cell, digit); digits are 1-based.
class PheromoneMatrix {
 public:
  PheromoneMatrix(BoxOrder order, double tau0);

  BoxOrder order() const { return order_; }
  int cell_count() const { return order_.cells(); }
  int side() const { return order_.side(); }

  double operator()(int cell, int digit) const { return levels_[index(cell, digit)]; }
  double& operator()(int cell, int digit) { return levels_[index(cell, digit)]; }

  std::span<const double> levels() const { return levels_; }

 private:
  std::size_t index(int cell, int digit) const {
    return static_cast<std::size_t>(cell) * static_cast<std::size_t>(side()) + static_cast<std::size_t>(digit - 1);
  }

  BoxOrder order_;
  std::vector<double> levels_;
};

/// Uniform matrix filled with tau0; tau0 must be positive and finite.
PheromoneMatrix init_pheromone(BoxOrder order, double tau0);

/// Choose a digit from `candidates`: with probability q0 the highest
/// pheromone (lowest digit on ties), otherwise roulette over the candidates.
/// `literal_comparison` flips the greedy test to q > q0.
int select_value(const PheromoneMatrix& tau, int cell, ValueSet candidates, double q0, Rng& rng,
                 bool literal_comparison = false);

/// tau <- (1 - xi) * tau + xi * tau0 for one entry.
void local_update(PheromoneMatrix& tau, int cell, int digit, double xi, double tau0);

/// Deposit c / (c - f_max). Requires 0 <= f_max < c.
double delta_tau(int cells, int max_fixed);

struct CellValue {
  int cell;
  int digit;
  bool operator==(const CellValue&) const = default;
};

struct BestRecord {
  double delta_tau_best = 0.0;
  std::vector<CellValue> best_fixed;
};

/// Reinforce every entry of the best solution with the current best deposit.
void global_update(PheromoneMatrix& tau, const BestRecord& best, double rho);

/// delta_tau_best <- delta_tau_best * (1 - rate).
void best_value_evaporation(BestRecord& best, double rate);

/// All fixed (cell, digit) pairs of a board.
std::vector<CellValue> fixed_cells(const Board& board);

struct Ant {
  Board board;
  int start_cell = 0;
  std::vector<CellValue> choices;

  int fixed_count() const { return board.fixed_count(); }
};

/// One construction phase: ants start on distinct random cells and walk the
/// grid cyclically in lockstep, choosing digits for unfixed cells and applying
/// the local update after each choice. Cells whose candidate set emptied are
/// skipped. `ants` is resized and reused.
void construct_iteration(const Board& base, PheromoneMatrix& tau, const ColonyParams& params, Rng& rng,
                         std::vector<Ant>& ants);

std::vector<Ant> construct_iteration(const Board& base, PheromoneMatrix& tau, const ColonyParams& params,
                                     Rng& rng);

/// State visible to an observer after each completed iteration.
struct IterationTrace {
  std::uint64_t iteration;
  int best_fixed;         // max f over this iteration's ants
  double delta_tau;       // deposit for this iteration
  double delta_tau_best;  // after the evaporation step
  bool new_best;
  const PheromoneMatrix& pheromone;
};

using IterationObserver = std::function<void(const IterationTrace&)>;

/// Colony solver. The instance is propagated first; if that alone solves it
/// the outcome reports zero iterations. The deadline is checked once per
/// iteration.
SolveOutcome solve_acs(const Board& instance, const ColonyParams& params, const SolveLimits& limits,
                       std::uint64_t seed, const IterationObserver& observer = {});

}  // namespace sudoku
