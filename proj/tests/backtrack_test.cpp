#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sudoku/backtrack.hpp"
#include "sudoku/dlx.hpp"

namespace {

using namespace sudoku;

TEST(Backtrack, SolvedInstanceNeedsNoNodes) {
  const Board solved = parse_instance(oracle::kClassicSolution, BoxOrder(3));
  const auto r = solve_backtracking(solved, SolveLimits{});
  ASSERT_TRUE(r.outcome.solved());
  EXPECT_EQ(r.stats.nodes_expanded, 0u);
  EXPECT_EQ(*r.outcome.solution, solved);
}

TEST(Backtrack, PropagationOnlyInstanceNeedsNoNodes) {
  const auto r = solve_backtracking(parse_instance(oracle::kClassicPuzzle, BoxOrder(3)), SolveLimits{});
  ASSERT_TRUE(r.outcome.solved());
  EXPECT_EQ(r.stats.nodes_expanded, 0u);
  EXPECT_EQ(format_instance(*r.outcome.solution), oracle::kClassicSolution + std::string("\n"));
}

TEST(Backtrack, BlankBoardsSolve) {
  for (int n : {2, 3, 4}) {
    const auto r = solve_backtracking(Board(BoxOrder(n)), SolveLimits{Seconds(20.0), 0});
    ASSERT_TRUE(r.outcome.solved()) << "order " << n;
    EXPECT_TRUE(oracle::valid_grid(n, r.outcome.solution->digits()));
  }
}

TEST(Backtrack, DuplicateGivensAreUnsolvable) {
  std::string text(81, '.');
  text[0] = '2';
  text[80] = '2';
  text[1] = '2';
  const auto r = solve_backtracking(parse_instance(text, BoxOrder(3)), SolveLimits{});
  EXPECT_EQ(r.outcome.status, SolveStatus::unsolvable);
}

TEST(Backtrack, AgreesWithBruteForceOnOrder2) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> digit(0, 4);
  int unsolvable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> givens(16);
    for (int& g : givens) g = rng() % 3 == 0 ? digit(rng) : 0;
    Board b(BoxOrder(2));
    for (int cell = 0; cell < 16; ++cell) {
      if (givens[cell] != 0) b.set_candidates(cell, ValueSet::single(givens[cell]));
    }
    const bool expected = oracle::count_order2_completions(givens) > 0;
    const auto r = solve_backtracking(b, SolveLimits{});
    ASSERT_EQ(r.outcome.solved(), expected) << format_instance(b);
    if (expected) {
      EXPECT_TRUE(solves(b, *r.outcome.solution));
    } else {
      EXPECT_EQ(r.outcome.status, SolveStatus::unsolvable);
      ++unsolvable;
    }
  }
  EXPECT_GT(unsolvable, 0);
}

TEST(Backtrack, Deterministic) {
  const Board instance = load_instance(SUDOKU_NAMED_DIR "/goldennugget.sdk");
  const auto a = solve_backtracking(instance, SolveLimits{});
  const auto b = solve_backtracking(instance, SolveLimits{});
  ASSERT_TRUE(a.outcome.solved());
  EXPECT_EQ(*a.outcome.solution, *b.outcome.solution);
  EXPECT_EQ(a.stats.nodes_expanded, b.stats.nodes_expanded);
  EXPECT_EQ(a.stats.max_depth, b.stats.max_depth);
  EXPECT_EQ(a.outcome.iterations, a.stats.nodes_expanded);
}

TEST(Backtrack, NamedInstancesMatchUniqueSolution) {
  for (const char* name : {"aiescargot", "platinumblond", "goldennugget", "reddwarf", "coly013", "tarx0134"}) {
    const Board instance = load_instance(std::string(SUDOKU_NAMED_DIR "/") + name + ".sdk");
    const auto r = solve_backtracking(instance, SolveLimits{});
    ASSERT_TRUE(r.outcome.solved()) << name;
    EXPECT_TRUE(solves(instance, *r.outcome.solution)) << name;
    const auto d = solve_dlx(instance, SolveLimits{});
    ASSERT_TRUE(d.outcome.solved()) << name;
    EXPECT_EQ(*r.outcome.solution, *d.outcome.solution) << name;
  }
}

TEST(Backtrack, IterationCapStopsSearch) {
  const auto r = solve_backtracking(load_instance(SUDOKU_NAMED_DIR "/platinumblond.sdk"), SolveLimits{Seconds(60.0), 5});
  EXPECT_EQ(r.outcome.status, SolveStatus::timeout);
  EXPECT_FALSE(r.outcome.solution);
}

}  // namespace
