#include "cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sudoku/acs.hpp"
#include "sudoku/backtrack.hpp"
#include "sudoku/bench.hpp"
#include "sudoku/board.hpp"
#include "sudoku/dlx.hpp"
#include "sudoku/generator.hpp"

namespace sudoku::cli {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::array kColonyKeys = {"m", "rho", "q0", "xi", "f-bve", "tau0", "best-mode", "ant-stop-on-contradiction"};

struct ColonyOptions {
  std::array<std::optional<std::string>, kColonyKeys.size()> values;
  bool eq3_literal = false;
  std::string config;
};

struct SharedOptions {
  std::optional<int> order;
  std::optional<std::string> timeout;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_shared(CLI::App* sub, SharedOptions& o) {
  sub->add_option("--order", o.order, "Box order n (grid side n*n)")->check(CLI::Range(2, 8));
  sub->add_option("--timeout", o.timeout, "Time limit, e.g. 5s, 250ms, 2m");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--out", o.out, "Output path");
}

void add_colony(CLI::App* sub, ColonyOptions& o) {
  for (std::size_t k = 0; k < kColonyKeys.size(); ++k) {
    sub->add_option(std::string("--") + kColonyKeys[k], o.values[k])->group("Colony");
  }
  sub->add_flag("--eq3-literal", o.eq3_literal, "Greedy branch when q > q0")->group("Colony");
  sub->add_option("--config", o.config, "key=value parameter file")->group("Colony");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Resolve colony parameters plus seed/timeout: config file first, flags win.
ColonyParams resolve_colony(const ColonyOptions& o, SharedOptions& shared) {
  ColonyParams params;
  if (!o.config.empty()) {
    std::istringstream lines(read_file(o.config));
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      const std::string body = trim(line.substr(0, line.find('#')));
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        throw UsageError(o.config + ":" + std::to_string(line_no) + ": expected key=value");
      }
      const std::string key = trim(std::string_view(body).substr(0, eq));
      const std::string value = trim(std::string_view(body).substr(eq + 1));
      if (key == "seed") {
        if (!shared.seed) shared.seed = std::stoull(value);
      } else if (key == "timeout") {
        if (!shared.timeout) shared.timeout = value;
      } else {
        apply_param(params, key, value);
      }
    }
  }
  for (std::size_t k = 0; k < kColonyKeys.size(); ++k) {
    if (o.values[k]) apply_param(params, kColonyKeys[k], *o.values[k]);
  }
  if (o.eq3_literal) params.eq3_literal = true;
  params.validate();
  return params;
}

Board read_board(const std::string& path, const std::optional<int>& order) {
  const std::string text = read_file(path);
  return order ? parse_instance(text, BoxOrder(*order)) : parse_instance(text);
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  const auto number = [](std::string_view s) {
    double v = 0.0;
    const std::string t = trim(s);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) throw UsageError("bad fraction '" + t + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = std::min(text.find(':', start), text.size());
      parts.push_back(number(std::string_view(text).substr(start, end - start)));
      start = end + 1;
    }
    if (parts.size() != 3 || parts[2] <= 0.0) throw UsageError("fraction range must be start:stop:step");
    const auto steps = static_cast<int>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (int k = 0; k <= steps; ++k) out.push_back(std::round((parts[0] + k * parts[2]) * 1e6) / 1e6);
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = std::min(text.find(',', start), text.size());
      out.push_back(number(std::string_view(text).substr(start, end - start)));
      start = end + 1;
    }
  }
  return out;
}

std::vector<BenchInstance> gather_instances(const std::string& suite, const std::vector<std::string>& files) {
  std::vector<BenchInstance> out;
  if (!suite.empty()) out = load_suite(suite);
  std::vector<fs::path> paths(files.begin(), files.end());
  auto loose = load_instances(paths);
  std::move(loose.begin(), loose.end(), std::back_inserter(out));
  if (out.empty()) throw UsageError("no instances given (use --suite or list files)");
  return out;
}

void write_to(const std::string& path, const auto& writer) {
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write " + path);
  writer(file);
  if (!file) throw UsageError("write failed: " + path);
}

void print_summary(std::ostream& out, std::span<const SummaryRow> rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %5s %8s %5s %8s %12s\n", "solver", "order", "fraction", "n", "success",
                "mean_time_s");
  out << line;
  for (const SummaryRow& r : rows) {
    const std::string mean = r.mean_time_s ? std::to_string(*r.mean_time_s) : "-";
    std::snprintf(line, sizeof line, "%-10s %5d %8.2f %5zu %7.1f%% %12s\n", r.solver.c_str(), r.order, r.fraction,
                  r.n, 100.0 * r.success_rate(), mean.c_str());
    out << line;
  }
}

int cmd_solve(const std::string& file, const std::string& solver_name, bool pretty, bool no_presolve,
              SharedOptions shared, const ColonyOptions& colony, std::ostream& out, std::ostream& err) {
  const ColonyParams params = resolve_colony(colony, shared);
  const SolverKind solver = parse_solver(solver_name);
  const Board board = read_board(file, shared.order);
  const SolveLimits limits{shared.timeout ? parse_duration(*shared.timeout) : default_timeout(board.order()), 0};

  SolveOutcome outcome;
  std::string detail;
  switch (solver) {
    case SolverKind::acs:
      outcome = solve_acs(board, params, limits, shared.seed.value_or(0));
      detail = std::to_string(outcome.iterations) + " iterations";
      break;
    case SolverKind::bs: {
      BacktrackResult r = solve_backtracking(board, limits);
      detail = std::to_string(r.stats.nodes_expanded) + " nodes, max depth " + std::to_string(r.stats.max_depth);
      outcome = std::move(r.outcome);
      break;
    }
    case SolverKind::dlx: {
      DlxResult r = solve_dlx(board, limits, no_presolve ? Presolve::raw : Presolve::propagate);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%llu nodes, reduce %.6f s, search %.6f s",
                    static_cast<unsigned long long>(r.nodes), r.reduce_s, r.search_s);
      detail = buf;
      outcome = std::move(r.outcome);
      break;
    }
  }

  char elapsed[64];
  std::snprintf(elapsed, sizeof elapsed, "%.6f s", outcome.elapsed_s);
  if (!outcome.solved()) {
    err << to_string(outcome.status) << " after " << elapsed << " (" << detail << ")\n";
    return kSolverFailure;
  }
  const std::string grid = pretty ? format_pretty(*outcome.solution) : format_instance(*outcome.solution);
  out << grid;
  if (!shared.out.empty()) write_to(shared.out, [&](std::ostream& f) { f << format_instance(*outcome.solution); });
  err << "solved in " << elapsed << " (" << detail << ")\n";
  return kOk;
}

int cmd_generate(const std::string& fractions, int count, SharedOptions shared, std::ostream& out) {
  if (shared.out.empty()) throw UsageError("generate needs --out <directory>");
  SuiteSpec spec{BoxOrder(shared.order.value_or(3)), parse_fractions(fractions), count, shared.seed.value_or(0)};
  spec.validate();
  const auto suite = generate_suite(spec);
  write_suite(suite, shared.out);
  out << "wrote " << suite.size() << " instances and manifest.csv to " << shared.out << "\n";
  return kOk;
}

BenchConfig bench_config(SharedOptions& shared, const ColonyOptions& colony, int runs, int threads) {
  BenchConfig config;
  config.params = resolve_colony(colony, shared);
  if (shared.timeout) config.timeout = parse_duration(*shared.timeout);
  config.seed = shared.seed.value_or(0);
  config.runs = runs;
  config.threads = threads;
  return config;
}

int cmd_bench(const std::string& suite, const std::vector<std::string>& files, const std::string& solvers,
              const std::string& summary_path, int runs, int threads, SharedOptions shared,
              const ColonyOptions& colony, std::ostream& out) {
  if (shared.out.empty()) throw UsageError("bench needs --out <records.csv>");
  const auto kinds = parse_solver_list(solvers);
  const BenchConfig config = bench_config(shared, colony, runs, threads);
  const auto instances = gather_instances(suite, files);
  const auto records = run_suite(instances, kinds, config);
  write_to(shared.out, [&](std::ostream& f) { write_records_csv(f, records); });
  const auto rows = summarize(records);
  if (!summary_path.empty()) write_to(summary_path, [&](std::ostream& f) { write_summary_csv(f, rows); });
  print_summary(out, rows);
  return kOk;
}

int cmd_ablate(const std::string& suite, const std::vector<std::string>& files, const std::string& summary_path,
               int runs, int threads, SharedOptions shared, const ColonyOptions& colony, std::ostream& out) {
  if (shared.out.empty()) throw UsageError("ablate needs --out <records.csv>");
  const BenchConfig config = bench_config(shared, colony, runs, threads);
  const auto instances = gather_instances(suite, files);
  const AblationResult result = run_ablation(instances, config);

  std::vector<BenchRecord> all = result.with_bve;
  all.insert(all.end(), result.without_bve.begin(), result.without_bve.end());
  write_to(shared.out, [&](std::ostream& f) { write_records_csv(f, all); });
  std::vector<SummaryRow> rows = result.summary_with_bve;
  rows.insert(rows.end(), result.summary_without_bve.begin(), result.summary_without_bve.end());
  if (!summary_path.empty()) write_to(summary_path, [&](std::ostream& f) { write_summary_csv(f, rows); });

  // per-instance success counts, the form used for named puzzles
  std::map<std::string, std::array<int, 3>> per_instance;
  for (const auto& r : result.with_bve) {
    auto& c = per_instance[r.instance];
    c[0] += r.status == RecordStatus::solved;
    ++c[2];
  }
  for (const auto& r : result.without_bve) per_instance[r.instance][1] += r.status == RecordStatus::solved;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %10s %10s %6s\n", "instance", "bve", "no-bve", "runs");
  out << line;
  for (const auto& [name, c] : per_instance) {
    std::snprintf(line, sizeof line, "%-24s %10d %10d %6d\n", name.c_str(), c[0], c[1], c[2]);
    out << line;
  }
  return kOk;
}

int cmd_count(const std::string& file, std::size_t cap, const SharedOptions& shared, std::ostream& out) {
  const Board board = read_board(file, shared.order);
  const Seconds timeout =
      shared.timeout ? parse_duration(*shared.timeout) : Seconds(std::numeric_limits<double>::infinity());
  out << count_solutions(board, cap, timeout) << "\n";
  return kOk;
}

int cmd_analyze(const std::string& suite, const std::vector<std::string>& files, const SharedOptions& shared,
                std::ostream& out) {
  const auto rows = analyze_instances(gather_instances(suite, files));
  if (!shared.out.empty()) write_to(shared.out, [&](std::ostream& f) { write_analysis_csv(f, rows); });
  char line[160];
  std::snprintf(line, sizeof line, "%5s %8s %5s %9s %14s\n", "order", "fraction", "n", "trivial", "mean_set_size");
  out << line;
  for (const AnalysisRow& r : rows) {
    std::snprintf(line, sizeof line, "%5d %8.2f %5zu %9.3f %14.3f\n", r.order, r.fraction, r.n,
                  r.trivial_fraction(), r.mean_value_set_size);
    out << line;
  }
  return kOk;
}

}  // namespace

Seconds parse_duration(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr == text.data()) throw std::invalid_argument("bad duration '" + std::string(text) + "'");
  const std::string_view unit(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr));
  double scale = 0.0;
  if (unit.empty() || unit == "s") {
    scale = 1.0;
  } else if (unit == "ms") {
    scale = 1e-3;
  } else if (unit == "m" || unit == "min") {
    scale = 60.0;
  } else {
    throw std::invalid_argument("bad duration unit in '" + std::string(text) + "'");
  }
  if (!(value > 0.0)) throw std::invalid_argument("duration must be positive");
  return Seconds(value * scale);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sudoku solvers: ant colony system with best value evaporation, backtracking, dancing links"};
  app.name("sudoku_acs");
  app.require_subcommand(1);

  SharedOptions shared;
  ColonyOptions colony;
  std::string file, solver = "acs", suite, solvers = "acs,bs,dlx", summary, fractions = "0.05:0.95:0.05";
  std::vector<std::string> files;
  bool pretty = false, no_presolve = false;
  int count = 100, runs = 1, threads = 0;
  std::size_t cap = 1000;

  auto* solve = app.add_subcommand("solve", "Solve one instance and print the grid");
  solve->add_option("instance", file, "Instance file")->required();
  solve->add_option("--solver", solver, "acs, bs or dlx")->check(CLI::IsMember({"acs", "bs", "dlx"}));
  solve->add_flag("--pretty", pretty, "Boxed grid instead of the instance format");
  solve->add_flag("--no-presolve", no_presolve, "dlx: build the cover matrix from raw givens");
  add_shared(solve, shared);
  add_colony(solve, colony);

  auto* generate = app.add_subcommand("generate", "Generate a random instance suite");
  generate->add_option("--fractions", fractions, "List (0.4,0.45) or range start:stop:step");
  generate->add_option("--count", count, "Instances per fraction")->check(CLI::PositiveNumber);
  add_shared(generate, shared);

  auto* bench = app.add_subcommand("bench", "Run solvers over instances and write CSV results");
  bench->add_option("--suite", suite, "Suite manifest.csv");
  bench->add_option("instances", files, "Instance files");
  bench->add_option("--solvers", solvers, "Comma separated solver list");
  bench->add_option("--summary", summary, "Summary CSV path");
  bench->add_option("--runs", runs, "Runs per instance and solver")->check(CLI::PositiveNumber);
  bench->add_option("--threads", threads, "Worker threads (default: cores, capped by SUDOKU_ACS_THREADS)");
  add_shared(bench, shared);
  add_colony(bench, colony);

  auto* ablate = app.add_subcommand("ablate", "Colony with and without best value evaporation");
  ablate->add_option("--suite", suite, "Suite manifest.csv");
  ablate->add_option("instances", files, "Instance files");
  ablate->add_option("--summary", summary, "Summary CSV path");
  ablate->add_option("--runs", runs, "Runs per instance")->check(CLI::PositiveNumber);
  ablate->add_option("--threads", threads, "Worker threads");
  add_shared(ablate, shared);
  add_colony(ablate, colony);

  auto* count_cmd = app.add_subcommand("count", "Count solutions with dancing links");
  count_cmd->add_option("instance", file, "Instance file")->required();
  count_cmd->add_option("--cap", cap, "Stop counting at this many solutions")->check(CLI::Range(2, 1 << 30));
  add_shared(count_cmd, shared);

  auto* analyze = app.add_subcommand("analyze", "Trivial-instance share and mean candidate-set size");
  analyze->add_option("--suite", suite, "Suite manifest.csv");
  analyze->add_option("instances", files, "Instance files");
  add_shared(analyze, shared);

  std::vector<const char*> argv{"sudoku_acs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(file, solver, pretty, no_presolve, shared, colony, out, err);
    if (*generate) return cmd_generate(fractions, count, shared, out);
    if (*bench) return cmd_bench(suite, files, solvers, summary, runs, threads, shared, colony, out);
    if (*ablate) return cmd_ablate(suite, files, summary, runs, threads, shared, colony, out);
    if (*count_cmd) return cmd_count(file, cap, shared, out);
    if (*analyze) return cmd_analyze(suite, files, shared, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace sudoku::cli
