#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sudoku/acs.hpp"
#include "sudoku/board.hpp"

namespace sudoku {

/// SplitMix64 step; used to derive independent per-instance seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for item `index` of stream `stream` under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

/// A complete grid found by the colony solver on a blank board.
Board generate_solution(BoxOrder order, Rng& rng);

/// round-half-up of c * fraction.
int given_count(int cells, double fixed_fraction);

/// Keep given_count(c, fraction) cells of `solution` chosen uniformly without
/// replacement and blank the rest. No propagation.
Board make_instance(const Board& solution, double fixed_fraction, Rng& rng);

struct SuiteSpec {
  BoxOrder order{3};
  std::vector<double> fractions;
  int count_per_fraction = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// 0.05, 0.10, ..., 0.95 (or with `include_zero`, starting at 0).
std::vector<double> fraction_sweep(bool include_zero = false);

struct SuiteEntry {
  std::string filename;  // <order>_<fraction>_<index>.sdk
  std::uint64_t seed;
  double fraction;
  BoxOrder order;
  Board instance;
  Board solution;
};

/// One fresh solution per instance; entry k of fraction j uses
/// derive_seed(spec.seed, j, k).
std::vector<SuiteEntry> generate_suite(const SuiteSpec& spec);

/// Writes each instance file plus `manifest.csv` (filename,seed,fraction,order).
void write_suite(const std::vector<SuiteEntry>& suite, const std::filesystem::path& directory);

struct ManifestRow {
  std::string filename;
  std::uint64_t seed;
  double fraction;
  int order;
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest);

std::string format_fraction(double fraction);

}  // namespace sudoku
