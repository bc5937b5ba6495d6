#include "sudoku/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sudoku {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

Board generate_solution(BoxOrder order, Rng& rng) {
  const Board blank(order);
  const SolveLimits limits{Seconds(600.0), 0};
  for (int attempt = 0; attempt < 8; ++attempt) {
    SolveOutcome out = solve_acs(blank, ColonyParams{}, limits, rng());
    if (out.solved()) return std::move(*out.solution);
  }
  throw std::runtime_error("colony failed to complete a blank grid of order " + std::to_string(order.box()));
}

int given_count(int cells, double fixed_fraction) {
  // the epsilon absorbs representation error such as 0.35 * 100 = 34.999...
  return static_cast<int>(std::floor(cells * fixed_fraction + 0.5 + 1e-9));
}

Board make_instance(const Board& solution, double fixed_fraction, Rng& rng) {
  if (!solution.is_solved()) throw std::invalid_argument("make_instance needs a solved board");
  if (!(fixed_fraction >= 0.0 && fixed_fraction <= 1.0)) {
    throw std::invalid_argument("fixed fraction must lie in [0, 1]");
  }
  const int c = solution.cell_count();
  const int keep = given_count(c, fixed_fraction);

  std::vector<int> order(static_cast<std::size_t>(c));
  std::iota(order.begin(), order.end(), 0);
  for (int k = 0; k < keep; ++k) {
    std::uniform_int_distribution<int> pick(k, c - 1);
    std::swap(order[k], order[pick(rng)]);
  }

  Board instance(solution.order());
  for (int k = 0; k < keep; ++k) instance.set_candidates(order[k], solution.cell(order[k]));
  return instance;
}

void SuiteSpec::validate() const {
  if (count_per_fraction < 1) throw std::invalid_argument("count per fraction must be at least 1");
  if (!std::is_sorted(fractions.begin(), fractions.end())) throw std::invalid_argument("fractions must be sorted");
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("fractions must lie in [0, 1]");
  }
}

std::vector<double> fraction_sweep(bool include_zero) {
  std::vector<double> out;
  for (int k = include_zero ? 0 : 1; k <= 19; ++k) out.push_back(k * 0.05);
  return out;
}

std::string format_fraction(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", fraction);
  return buf;
}

std::vector<SuiteEntry> generate_suite(const SuiteSpec& spec) {
  spec.validate();
  std::vector<SuiteEntry> suite;
  suite.reserve(spec.fractions.size() * static_cast<std::size_t>(spec.count_per_fraction));
  for (std::size_t j = 0; j < spec.fractions.size(); ++j) {
    const double fraction = spec.fractions[j];
    for (int k = 0; k < spec.count_per_fraction; ++k) {
      const std::uint64_t seed = derive_seed(spec.seed, j, static_cast<std::uint64_t>(k));
      Rng rng(seed);
      Board solution = generate_solution(spec.order, rng);
      Board instance = make_instance(solution, fraction, rng);
      std::string name = std::to_string(spec.order.box()) + "_" + format_fraction(fraction) + "_" +
                         std::to_string(k) + ".sdk";
      suite.push_back({std::move(name), seed, fraction, spec.order, std::move(instance), std::move(solution)});
    }
  }
  return suite;
}

void write_suite(const std::vector<SuiteEntry>& suite, const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  const fs::path manifest_path = directory / "manifest.csv";
  std::ofstream manifest(manifest_path);
  if (!manifest) throw std::runtime_error("cannot write " + manifest_path.string());
  manifest << "filename,seed,fraction,order\n";
  for (const SuiteEntry& e : suite) {
    const fs::path path = directory / e.filename;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_instance(e.instance);
    if (!out) throw std::runtime_error("write failed: " + path.string());
    manifest << e.filename << ',' << e.seed << ',' << format_fraction(e.fraction) << ',' << e.order.box() << '\n';
  }
  if (!manifest) throw std::runtime_error("write failed: " + manifest_path.string());
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw std::runtime_error("cannot open manifest " + manifest.string());
  std::vector<ManifestRow> rows;
  std::string line;
  std::getline(in, line);
  if (line.rfind("filename,seed,fraction,order", 0) != 0) {
    throw std::runtime_error(manifest.string() + ": unexpected manifest header");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    ManifestRow row;
    std::string seed, fraction, order;
    if (!std::getline(fields, row.filename, ',') || !std::getline(fields, seed, ',') ||
        !std::getline(fields, fraction, ',') || !std::getline(fields, order)) {
      throw std::runtime_error(manifest.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    try {
      row.seed = std::stoull(seed);
      row.fraction = std::stod(fraction);
      row.order = std::stoi(order);
    } catch (const std::exception&) {
      throw std::runtime_error(manifest.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sudoku
