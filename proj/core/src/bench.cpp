#include "sudoku/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "sudoku/backtrack.hpp"
#include "sudoku/generator.hpp"

namespace sudoku {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::acs:
      return "acs";
    case SolverKind::bs:
      return "bs";
    case SolverKind::dlx:
      return "dlx";
  }
  return "unknown";
}

SolverKind parse_solver(std::string_view name) {
  if (name == "acs") return SolverKind::acs;
  if (name == "bs") return SolverKind::bs;
  if (name == "dlx") return SolverKind::dlx;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "' (expected acs, bs or dlx)");
}

std::vector<SolverKind> parse_solver_list(std::string_view comma_separated) {
  std::vector<SolverKind> out;
  std::size_t start = 0;
  while (start <= comma_separated.size()) {
    const std::size_t end = std::min(comma_separated.find(',', start), comma_separated.size());
    out.push_back(parse_solver(comma_separated.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

std::string_view to_string(RecordStatus status) {
  switch (status) {
    case RecordStatus::solved:
      return "solved";
    case RecordStatus::timeout:
      return "timeout";
    case RecordStatus::unsolvable:
      return "unsolvable";
    case RecordStatus::error:
      return "error";
  }
  return "unknown";
}

BenchInstance make_bench_instance(std::string id, Board board, std::optional<double> fraction) {
  if (!fraction) {
    int givens = 0;
    for (ValueSet s : board.cells()) givens += s.fixed() ? 1 : 0;
    fraction = std::round(100.0 * givens / board.cell_count()) / 100.0;
  }
  const BoxOrder order = board.order();
  return {std::move(id), order, *fraction, std::move(board)};
}

std::vector<BenchInstance> load_suite(const std::filesystem::path& manifest) {
  const auto dir = manifest.parent_path();
  std::vector<BenchInstance> out;
  for (const ManifestRow& row : read_manifest(manifest)) {
    Board board = load_instance((dir / row.filename).string());
    if (board.order().box() != row.order) {
      throw std::runtime_error(row.filename + ": order differs from the manifest");
    }
    out.push_back(make_bench_instance(std::filesystem::path(row.filename).stem().string(), std::move(board),
                                      row.fraction));
  }
  return out;
}

std::vector<BenchInstance> load_instances(std::span<const std::filesystem::path> files) {
  std::vector<BenchInstance> out;
  for (const auto& file : files) {
    out.push_back(make_bench_instance(file.stem().string(), load_instance(file.string())));
  }
  return out;
}

Seconds default_timeout(BoxOrder order) {
  if (order.box() <= 3) return Seconds(5.0);
  if (order.box() == 4) return Seconds(20.0);
  return Seconds(120.0);
}

int default_worker_count() {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* cap = std::getenv("SUDOKU_ACS_THREADS")) {
    const int requested = std::atoi(cap);
    if (requested >= 1) workers = std::min(workers, requested);
  }
  return workers;
}

namespace {

BenchRecord run_one(const BenchInstance& inst, SolverKind kind, std::uint64_t seed, const BenchConfig& config) {
  using Clock = std::chrono::steady_clock;
  BenchRecord rec;
  rec.instance = inst.id;
  rec.solver = kind == SolverKind::acs ? config.acs_label : std::string(to_string(kind));
  rec.seed = seed;
  rec.order = inst.order.box();
  rec.fraction = inst.fraction;

  const SolveLimits limits{config.timeout.value_or(default_timeout(inst.order)), 0};
  try {
    SolveOutcome outcome;
    const auto start = Clock::now();
    switch (kind) {
      case SolverKind::acs:
        outcome = solve_acs(inst.board, config.params, limits, seed);
        break;
      case SolverKind::bs:
        outcome = solve_backtracking(inst.board, limits).outcome;
        break;
      case SolverKind::dlx: {
        DlxResult r = solve_dlx(inst.board, limits, config.dlx_mode);
        rec.reduce_s = r.reduce_s;
        rec.search_s = r.search_s;
        outcome = std::move(r.outcome);
        break;
      }
    }
    rec.elapsed_s = Seconds(Clock::now() - start).count();
    rec.work_units = outcome.iterations;

    switch (outcome.status) {
      case SolveStatus::solved:
        if (outcome.solution && solves(inst.board, *outcome.solution)) {
          rec.status = RecordStatus::solved;
          rec.solution_hash = grid_hash(*outcome.solution);
        } else {
          rec.status = RecordStatus::error;
          rec.error = "claimed solution failed validation";
        }
        break;
      case SolveStatus::timeout:
        rec.status = RecordStatus::timeout;
        break;
      case SolveStatus::unsolvable:
        rec.status = RecordStatus::unsolvable;
        break;
    }
  } catch (const std::exception& e) {
    rec.status = RecordStatus::error;
    rec.error = e.what();
  }
  return rec;
}

std::optional<double> quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::nullopt;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string fmt_seconds(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

long long fraction_key(double fraction) { return std::llround(fraction * 1e6); }

}  // namespace

std::vector<BenchRecord> run_suite(std::span<const BenchInstance> instances, std::span<const SolverKind> solvers,
                                   const BenchConfig& config) {
  if (config.runs < 1) throw std::invalid_argument("runs must be at least 1");
  struct Task {
    std::size_t instance;
    SolverKind solver;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (int r = 0; r < config.runs; ++r) {
      // the seed ignores the solver so paired variants share their streams
      const std::uint64_t seed = derive_seed(config.seed, i, static_cast<std::uint64_t>(r));
      for (SolverKind s : solvers) tasks.push_back({i, s, seed});
    }
  }

  std::vector<BenchRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      records[t] = run_one(instances[tasks[t].instance], tasks[t].solver, tasks[t].seed, config);
    }
  };

  const int threads = std::max(1, std::min<int>(config.threads > 0 ? config.threads : default_worker_count(),
                                                 static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  return records;
}

std::vector<SummaryRow> summarize(std::span<const BenchRecord> records) {
  if (records.empty()) throw std::invalid_argument("summarize needs at least one record");
  using Key = std::tuple<std::string, int, long long>;
  std::map<Key, std::pair<SummaryRow, std::vector<double>>> groups;
  for (const BenchRecord& r : records) {
    auto& [row, times] = groups[Key{r.solver, r.order, fraction_key(r.fraction)}];
    row.solver = r.solver;
    row.order = r.order;
    row.fraction = r.fraction;
    ++row.n;
    if (r.status == RecordStatus::solved) {
      ++row.solved;
      times.push_back(r.elapsed_s);
    }
  }
  std::vector<SummaryRow> out;
  for (auto& [key, group] : groups) {
    auto& [row, times] = group;
    if (!times.empty()) {
      std::sort(times.begin(), times.end());
      double total = 0.0;
      for (double t : times) total += t;
      row.mean_time_s = total / static_cast<double>(times.size());
      row.median_time_s = quantile(times, 0.5);
      row.q1_s = quantile(times, 0.25);
      row.q3_s = quantile(times, 0.75);
      row.min_s = times.front();
      row.max_s = times.back();
    }
    out.push_back(std::move(row));
  }
  return out;
}

void write_records_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "instance,solver,seed,status,elapsed_s,work_units\n";
  for (const BenchRecord& r : records) {
    out << r.instance << ',' << r.solver << ',' << r.seed << ',' << to_string(r.status) << ','
        << fmt_seconds(r.elapsed_s) << ',' << r.work_units << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
  out << "solver,order,fraction,n,success_rate,mean_time_s,median_time_s,q1_s,q3_s,min_s,max_s\n";
  for (const SummaryRow& r : rows) {
    char rate[32];
    std::snprintf(rate, sizeof rate, "%.6f", r.success_rate());
    out << r.solver << ',' << r.order << ',' << format_fraction(r.fraction) << ',' << r.n << ',' << rate << ','
        << fmt_seconds(r.mean_time_s) << ',' << fmt_seconds(r.median_time_s) << ',' << fmt_seconds(r.q1_s) << ','
        << fmt_seconds(r.q3_s) << ',' << fmt_seconds(r.min_s) << ',' << fmt_seconds(r.max_s) << '\n';
  }
}

std::vector<AnalysisRow> analyze_instances(std::span<const BenchInstance> instances) {
  std::map<std::pair<int, long long>, std::pair<AnalysisRow, double>> groups;
  for (const BenchInstance& inst : instances) {
    Board board = inst.board;
    board.initial_propagate();
    double total = 0.0;
    for (ValueSet s : board.cells()) total += s.size();

    auto& [row, size_sum] = groups[{inst.order.box(), fraction_key(inst.fraction)}];
    row.order = inst.order.box();
    row.fraction = inst.fraction;
    ++row.n;
    if (board.is_solved()) ++row.trivial;
    size_sum += total / board.cell_count();
  }
  std::vector<AnalysisRow> out;
  for (auto& [key, group] : groups) {
    group.first.mean_value_set_size = group.second / static_cast<double>(group.first.n);
    out.push_back(group.first);
  }
  return out;
}

void write_analysis_csv(std::ostream& out, std::span<const AnalysisRow> rows) {
  out << "order,fraction,n,trivial_fraction,mean_value_set_size\n";
  for (const AnalysisRow& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.trivial_fraction(), r.mean_value_set_size);
    out << r.order << ',' << format_fraction(r.fraction) << ',' << r.n << ',' << buf << '\n';
  }
}

AblationResult run_ablation(std::span<const BenchInstance> instances, const BenchConfig& config) {
  const SolverKind acs[] = {SolverKind::acs};
  AblationResult result;

  BenchConfig on = config;
  on.acs_label = "acs";
  result.with_bve = run_suite(instances, acs, on);

  BenchConfig off = config;
  off.params.bve_rate = 0.0;
  off.acs_label = "acs-nobve";
  result.without_bve = run_suite(instances, acs, off);

  result.summary_with_bve = summarize(result.with_bve);
  result.summary_without_bve = summarize(result.without_bve);
  return result;
}

}  // namespace sudoku
