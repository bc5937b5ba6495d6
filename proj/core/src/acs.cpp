#include "sudoku/acs.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sudoku {

namespace {

void require_rate(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(value));
  }
}

double parse_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw std::invalid_argument("bad boolean for " + std::string(key) + ": '" + std::string(text) + "'");
}

}  // namespace

void ColonyParams::validate() const {
  if (ants < 1) throw std::invalid_argument("ant count must be at least 1");
  require_rate(rho, "rho");
  require_rate(q0, "q0");
  require_rate(xi, "xi");
  require_rate(bve_rate, "f-bve");
  if (tau0 && !(*tau0 > 0.0 && std::isfinite(*tau0))) {
    throw std::invalid_argument("tau0 must be positive and finite");
  }
}

void apply_param(ColonyParams& params, std::string_view key, std::string_view value) {
  if (key == "m") {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw std::invalid_argument("m must be an integer");
    params.ants = static_cast<int>(v);
  } else if (key == "rho") {
    params.rho = parse_double(key, value);
  } else if (key == "q0") {
    params.q0 = parse_double(key, value);
  } else if (key == "xi") {
    params.xi = parse_double(key, value);
  } else if (key == "f-bve") {
    params.bve_rate = parse_double(key, value);
  } else if (key == "tau0") {
    params.tau0 = parse_double(key, value);
  } else if (key == "eq3-literal") {
    params.eq3_literal = parse_bool(key, value);
  } else if (key == "best-mode") {
    if (value == "stored") {
      params.best_mode = BestMode::stored;
    } else if (value == "iteration") {
      params.best_mode = BestMode::iteration;
    } else {
      throw std::invalid_argument("best-mode must be 'stored' or 'iteration'");
    }
  } else if (key == "ant-stop-on-contradiction") {
    params.stop_on_contradiction = parse_bool(key, value);
  } else {
    throw std::invalid_argument("unknown colony parameter '" + std::string(key) + "'");
  }
}

PheromoneMatrix::PheromoneMatrix(BoxOrder order, double tau0)
    : order_(order), levels_(static_cast<std::size_t>(order.cells()) * order.side(), tau0) {
  if (!(tau0 > 0.0 && std::isfinite(tau0))) throw std::invalid_argument("tau0 must be positive and finite");
}

PheromoneMatrix init_pheromone(BoxOrder order, double tau0) { return PheromoneMatrix(order, tau0); }

int select_value(const PheromoneMatrix& tau, int cell, ValueSet candidates, double q0, Rng& rng,
                 bool literal_comparison) {
  if (candidates.empty()) throw std::invalid_argument("select_value: empty candidate set");
  if (candidates.fixed()) return candidates.lowest();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double q = unit(rng);
  const bool greedy = literal_comparison ? q > q0 : q < q0;

  if (greedy) {
    int best = candidates.lowest();
    double best_level = tau(cell, best);
    for (int v : candidates) {
      if (tau(cell, v) > best_level) {
        best = v;
        best_level = tau(cell, v);
      }
    }
    return best;
  }

  double total = 0.0;
  for (int v : candidates) total += tau(cell, v);
  const double target = unit(rng) * total;
  double acc = 0.0;
  int last = candidates.lowest();
  for (int v : candidates) {
    acc += tau(cell, v);
    last = v;
    if (target < acc) return v;
  }
  return last;
}

void local_update(PheromoneMatrix& tau, int cell, int digit, double xi, double tau0) {
  double& level = tau(cell, digit);
  level = (1.0 - xi) * level + xi * tau0;
}

double delta_tau(int cells, int max_fixed) {
  if (max_fixed < 0 || max_fixed >= cells) {
    throw std::logic_error("delta_tau requires 0 <= f_max < c (got f_max=" + std::to_string(max_fixed) +
                           ", c=" + std::to_string(cells) + ")");
  }
  return static_cast<double>(cells) / static_cast<double>(cells - max_fixed);
}

void global_update(PheromoneMatrix& tau, const BestRecord& best, double rho) {
  for (const auto& [cell, digit] : best.best_fixed) {
    double& level = tau(cell, digit);
    level = (1.0 - rho) * level + rho * best.delta_tau_best;
  }
}

void best_value_evaporation(BestRecord& best, double rate) { best.delta_tau_best *= (1.0 - rate); }

std::vector<CellValue> fixed_cells(const Board& board) {
  std::vector<CellValue> out;
  out.reserve(static_cast<std::size_t>(board.fixed_count()));
  for (int i = 0; i < board.cell_count(); ++i) {
    const ValueSet s = board.cell(i);
    if (s.fixed()) out.push_back({i, s.lowest()});
  }
  return out;
}

void construct_iteration(const Board& base, PheromoneMatrix& tau, const ColonyParams& params, Rng& rng,
                         std::vector<Ant>& ants) {
  const int c = base.cell_count();
  const auto m = static_cast<std::size_t>(params.ants);
  if (params.ants > c) throw std::invalid_argument("more ants than cells");
  const double tau0 = params.initial_pheromone(c);

  if (ants.size() != m) ants.assign(m, Ant{base, 0, {}});

  // distinct start cells by partial Fisher-Yates
  thread_local std::vector<int> pool;
  pool.resize(static_cast<std::size_t>(c));
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t k = 0; k < m; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
    ants[k].board = base;
    ants[k].board.set_stop_on_contradiction(params.stop_on_contradiction);
    ants[k].start_cell = pool[k];
    ants[k].choices.clear();
  }

  thread_local std::vector<int> position;
  position.resize(m);
  for (std::size_t k = 0; k < m; ++k) position[k] = ants[k].start_cell;

  for (int step = 0; step < c; ++step) {
    for (std::size_t k = 0; k < m; ++k) {
      Ant& ant = ants[k];
      const int cell = position[k];
      position[k] = cell + 1 == c ? 0 : cell + 1;
      if (params.stop_on_contradiction && ant.board.contradiction()) continue;
      const ValueSet candidates = ant.board.cell(cell);
      if (candidates.fixed() || candidates.empty()) continue;
      const int digit = select_value(tau, cell, candidates, params.q0, rng, params.eq3_literal);
      ant.board.fix_value(cell, digit);
      ant.choices.push_back({cell, digit});
      local_update(tau, cell, digit, params.xi, tau0);
    }
  }
}

std::vector<Ant> construct_iteration(const Board& base, PheromoneMatrix& tau, const ColonyParams& params,
                                     Rng& rng) {
  std::vector<Ant> ants;
  construct_iteration(base, tau, params, rng, ants);
  return ants;
}

SolveOutcome solve_acs(const Board& instance, const ColonyParams& params, const SolveLimits& limits,
                       std::uint64_t seed, const IterationObserver& observer) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto seconds_since_start = [&] { return Seconds(Clock::now() - start).count(); };

  params.validate();
  SolveOutcome outcome;

  Board base = instance;
  base.initial_propagate();
  if (base.contradiction()) {
    outcome.status = SolveStatus::unsolvable;
    outcome.elapsed_s = seconds_since_start();
    return outcome;
  }
  if (base.is_solved()) {
    outcome.status = SolveStatus::solved;
    outcome.solution = std::move(base);
    outcome.elapsed_s = seconds_since_start();
    return outcome;
  }

  const int c = base.cell_count();
  if (params.ants > c) throw std::invalid_argument("more ants than cells");
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(limits.timeout);

  Rng rng(seed);
  PheromoneMatrix tau(base.order(), params.initial_pheromone(c));
  BestRecord best;
  BestRecord iteration_best;
  std::vector<Ant> ants;

  for (std::uint64_t iteration = 1;; ++iteration) {
    construct_iteration(base, tau, params, rng, ants);

    std::size_t leader = 0;
    for (std::size_t k = 1; k < ants.size(); ++k) {
      if (ants[k].fixed_count() > ants[leader].fixed_count()) leader = k;
    }
    const int f_max = ants[leader].fixed_count();

    if (f_max == c) {
      if (!ants[leader].board.is_solved()) throw std::logic_error("complete board fails the unit check");
      outcome.status = SolveStatus::solved;
      outcome.solution = std::move(ants[leader].board);
      outcome.iterations = iteration;
      outcome.elapsed_s = seconds_since_start();
      return outcome;
    }

    const double deposit = delta_tau(c, f_max);
    const bool new_best = deposit > best.delta_tau_best;
    if (new_best) {
      best.delta_tau_best = deposit;
      best.best_fixed = fixed_cells(ants[leader].board);
    }

    if (params.best_mode == BestMode::stored) {
      global_update(tau, best, params.rho);
    } else {
      iteration_best.delta_tau_best = best.delta_tau_best;
      iteration_best.best_fixed = fixed_cells(ants[leader].board);
      global_update(tau, iteration_best, params.rho);
    }
    best_value_evaporation(best, params.bve_rate);

    if (observer) observer(IterationTrace{iteration, f_max, deposit, best.delta_tau_best, new_best, tau});

    if ((limits.max_iterations != 0 && iteration >= limits.max_iterations) || Clock::now() >= deadline) {
      outcome.status = SolveStatus::timeout;
      outcome.iterations = iteration;
      outcome.elapsed_s = seconds_since_start();
      return outcome;
    }
  }
}

}  // namespace sudoku
