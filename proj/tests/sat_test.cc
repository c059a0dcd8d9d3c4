/*
 * Copyright 2026 The MPDT Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mpdt/sat.hpp"

#include <gtest/gtest.h>

#include <random>

#include "testing.hpp"

namespace mpdt::sat {
namespace {

using ::mpdt::testing::brute_force_sat;
using ::mpdt::testing::satisfies_all;

const Lit x1 = Lit::pos(1);
const Lit x2 = Lit::pos(2);

void add_all(Solver& s, const std::vector<Clause>& clauses) {
  for (const auto& c : clauses) s.add_clause(c);
}

TEST(Solver, UnitClause) {
  Solver s;
  s.add_clause({x1});
  ASSERT_EQ(s.solve(), Result::kSat);
  EXPECT_TRUE(s.model_value(1));
}

TEST(Solver, ContradictoryUnits) {
  Solver s;
  s.add_clause({x1});
  s.add_clause({~x1});
  EXPECT_EQ(s.solve(), Result::kUnsat);
}

TEST(Solver, EmptyClauseIsPermanent) {
  Solver s;
  EXPECT_FALSE(s.add_clause(std::span<const Lit>{}));
  EXPECT_EQ(s.solve(), Result::kUnsat);
  s.add_clause({x2});
  EXPECT_EQ(s.solve(), Result::kUnsat);
}

TEST(Solver, AssumptionsAreTemporary) {
  Solver s;
  s.add_clause({x1});
  EXPECT_EQ(s.solve({~x1}), Result::kUnsat);
  EXPECT_EQ(s.solve(), Result::kSat);
}

TEST(Solver, FinalConflictNamesFailingAssumptions) {
  Solver s;
  s.add_clause({~x1, ~x2});
  ASSERT_EQ(s.solve({Lit::pos(3), x1, x2}), Result::kUnsat);
  for (Lit l : s.final_conflict()) EXPECT_NE(l.var(), 3);
  EXPECT_EQ(s.solve({x1}), Result::kSat);
}

TEST(Solver, PropagationForcesModel) {
  Solver s;
  s.add_clause({x1, x2});
  s.add_clause({~x1});
  ASSERT_EQ(s.solve(), Result::kSat);
  EXPECT_FALSE(s.model_value(1));
  EXPECT_TRUE(s.model_value(2));
}

TEST(Solver, ModelBeforeSolveIsAnError) {
  Solver s;
  s.add_clause({x1});
  EXPECT_THROW(s.model(), std::logic_error);
  s.add_clause({~x1});
  s.solve();
  EXPECT_THROW(s.model(), std::logic_error);
}

TEST(Solver, PigeonholeFourThree) {
  const auto php = ::mpdt::testing::pigeonhole(4, 3);
  EXPECT_FALSE(brute_force_sat(php.clauses, php.n_vars));
  Solver s;
  add_all(s, php.clauses);
  EXPECT_EQ(s.solve(), Result::kUnsat);
}

TEST(Solver, PigeonholeEightSevenNeedsLearning) {
  const auto php = ::mpdt::testing::pigeonhole(8, 7);
  Solver s;
  add_all(s, php.clauses);
  EXPECT_EQ(s.solve(), Result::kUnsat);
  EXPECT_GT(s.stats().conflicts, 0u);
}

TEST(Solver, AgreesWithTruthTableOnRandom3Cnf) {
  std::mt19937_64 rng(11);
  int sat_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 20;
    const int m = std::uniform_int_distribution<int>(40, 100)(rng);
    const auto cs = ::mpdt::testing::random_kcnf(rng, n, m, 3);
    Solver s;
    add_all(s, cs);
    const Result r = s.solve();
    const bool expected = brute_force_sat(cs, n);
    ASSERT_EQ(r == Result::kSat, expected) << "trial " << trial;
    if (r == Result::kSat) {
      ++sat_count;
      ASSERT_TRUE(satisfies_all(cs, s.model()));
    }
  }
  EXPECT_GT(sat_count, 10);
  EXPECT_LT(sat_count, 95);
}

TEST(Solver, BlockingClausesEnumerateAllModels) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 8;
    const auto cs = ::mpdt::testing::random_kcnf(rng, n, 20, 3);
    std::size_t expected = 0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      std::vector<bool> a(n + 1);
      for (int v = 1; v <= n; ++v) a[v] = (m >> (v - 1)) & 1;
      expected += satisfies_all(cs, a) ? 1 : 0;
    }
    Solver s;
    s.ensure_var(n);
    add_all(s, cs);
    std::size_t found = 0;
    while (s.solve() == Result::kSat) {
      ++found;
      ASSERT_TRUE(satisfies_all(cs, s.model()));
      Clause block;
      for (int v = 1; v <= n; ++v) block.push_back(s.model_value(v) ? Lit::neg(v) : Lit::pos(v));
      s.add_clause(block);
    }
    EXPECT_EQ(found, expected);
  }
}

TEST(Solver, IncrementalAssumptionsMatchBruteForce) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 14;
    auto cs = ::mpdt::testing::random_kcnf(rng, n, 40, 3);
    Solver s;
    add_all(s, cs);
    for (int q = 0; q < 5; ++q) {
      std::vector<Lit> assumptions;
      for (int j = 0; j < 3; ++j) {
        const int v = std::uniform_int_distribution<int>(1, n)(rng);
        assumptions.push_back((rng() & 1) ? Lit::pos(v) : Lit::neg(v));
      }
      auto with_units = cs;
      for (Lit l : assumptions) with_units.push_back({l});
      const Result r = s.solve(assumptions);
      ASSERT_EQ(r == Result::kSat, brute_force_sat(with_units, n));
      if (r == Result::kSat) ASSERT_TRUE(satisfies_all(with_units, s.model()));
    }
  }
}

TEST(Solver, DeterministicForFixedInput) {
  std::mt19937_64 rng(99);
  const auto cs = ::mpdt::testing::random_kcnf(rng, 60, 250, 3);
  Solver a;
  Solver b;
  add_all(a, cs);
  add_all(b, cs);
  const Result ra = a.solve();
  ASSERT_EQ(ra, b.solve());
  if (ra == Result::kSat) EXPECT_EQ(a.model(), b.model());
  EXPECT_EQ(a.stats().conflicts, b.stats().conflicts);
}

TEST(Solver, ConflictBudgetInterrupts) {
  const auto php = ::mpdt::testing::pigeonhole(10, 9);
  Solver s;
  add_all(s, php.clauses);
  s.set_conflict_budget(50);
  EXPECT_EQ(s.solve(), Result::kInterrupted);
}

}  // namespace
}  // namespace mpdt::sat
