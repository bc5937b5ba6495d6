#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sudoku/acs.hpp"
#include "sudoku/board.hpp"
#include "sudoku/dlx.hpp"
#include "sudoku/outcome.hpp"

namespace sudoku {

enum class SolverKind { acs, bs, dlx };

std::string_view to_string(SolverKind kind);
/// Accepts "acs", "bs", "dlx"; throws std::invalid_argument otherwise.
SolverKind parse_solver(std::string_view name);
std::vector<SolverKind> parse_solver_list(std::string_view comma_separated);

struct BenchInstance {
  std::string id;
  BoxOrder order;
  double fraction;  // share of given cells
  Board board;
};

/// Wrap a parsed board; the fraction defaults to givens / c rounded to 0.01.
BenchInstance make_bench_instance(std::string id, Board board, std::optional<double> fraction = std::nullopt);

/// Load every instance listed in a manifest (paths relative to its directory).
std::vector<BenchInstance> load_suite(const std::filesystem::path& manifest);

/// Load loose instance files; the id is the file stem.
std::vector<BenchInstance> load_instances(std::span<const std::filesystem::path> files);

enum class RecordStatus { solved, timeout, unsolvable, error };

std::string_view to_string(RecordStatus status);

struct BenchRecord {
  std::string instance;
  std::string solver;
  std::uint64_t seed = 0;
  RecordStatus status = RecordStatus::error;
  double elapsed_s = 0.0;
  std::uint64_t work_units = 0;  // colony iterations or search nodes
  int order = 0;
  double fraction = 0.0;
  std::uint64_t solution_hash = 0;  // grid_hash of the validated solution
  double reduce_s = 0.0;            // dlx only: building the cover matrix
  double search_s = 0.0;            // dlx only: the search itself
  std::string error;
};

/// 5 s for order 3 and below, 20 s for order 4, 120 s beyond.
Seconds default_timeout(BoxOrder order);

/// Worker count: hardware threads, capped by SUDOKU_ACS_THREADS when set.
int default_worker_count();

struct BenchConfig {
  std::optional<Seconds> timeout;  // per-order default when unset
  std::uint64_t seed = 0;
  int runs = 1;     // repetitions per (instance, solver), each with its own seed
  int threads = 0;  // 0 = default_worker_count()
  ColonyParams params;
  std::string acs_label = "acs";
  Presolve dlx_mode = Presolve::propagate;
};

/// Run every solver on every instance. Each record's time covers the solve
/// call only; claimed solutions are re-validated and a failure (or an
/// exception) becomes an `error` record rather than aborting the suite.
/// Records come back in task order: instance-major, then run, then solver.
std::vector<BenchRecord> run_suite(std::span<const BenchInstance> instances, std::span<const SolverKind> solvers,
                                   const BenchConfig& config);

struct SummaryRow {
  std::string solver;
  int order = 0;
  double fraction = 0.0;
  std::size_t n = 0;
  std::size_t solved = 0;
  std::optional<double> mean_time_s;  // over successful runs only
  std::optional<double> median_time_s;
  std::optional<double> q1_s;
  std::optional<double> q3_s;
  std::optional<double> min_s;
  std::optional<double> max_s;

  double success_rate() const { return n == 0 ? 0.0 : static_cast<double>(solved) / static_cast<double>(n); }
};

/// One row per (solver, order, fraction), sorted by that key.
std::vector<SummaryRow> summarize(std::span<const BenchRecord> records);

void write_records_csv(std::ostream& out, std::span<const BenchRecord> records);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);

struct AnalysisRow {
  int order = 0;
  double fraction = 0.0;
  std::size_t n = 0;
  std::size_t trivial = 0;  // solved by the initial propagation alone
  double mean_value_set_size = 0.0;

  double trivial_fraction() const { return n == 0 ? 0.0 : static_cast<double>(trivial) / static_cast<double>(n); }
};

std::vector<AnalysisRow> analyze_instances(std::span<const BenchInstance> instances);

void write_analysis_csv(std::ostream& out, std::span<const AnalysisRow> rows);

struct AblationResult {
  std::vector<BenchRecord> with_bve;
  std::vector<BenchRecord> without_bve;
  std::vector<SummaryRow> summary_with_bve;
  std::vector<SummaryRow> summary_without_bve;
};

/// Colony runs with the configured evaporation rate and with it set to zero,
/// using identical seeds per (instance, run).
AblationResult run_ablation(std::span<const BenchInstance> instances, const BenchConfig& config);

}  // namespace sudoku
