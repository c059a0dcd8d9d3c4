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

#include "mpdt/trainer.hpp"

#include <gtest/gtest.h>

#include "mpdt/encoder.hpp"
#include "mpdt/oracle.hpp"
#include "testing.hpp"

namespace mpdt {
namespace {

// Generous enough for every dataset the generators below produce.
const oracle::Budget kBudget{6, 24, 21, 20};

BinDataset xor2() {
  return BinDataset::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
}

BinDataset load_mux6() {
  return binarize(discretize(load_csv(std::string(MPDT_DATA_DIR) + "/mux6.csv", "class")));
}

TEST(Greedy, SingleSplit) {
  const auto g = greedy_upper_bound(BinDataset::from_rows({{0, 1}, {1, 1}}, {0, 1}));
  EXPECT_EQ(g.ub, 3);
  EXPECT_EQ(g.tree.nodes[0].feature, 0);
}

TEST(Greedy, XorIsSeven) {
  const auto g = greedy_upper_bound(xor2());
  EXPECT_EQ(g.ub, 7);
  EXPECT_EQ(evaluate(g.tree, xor2()), 1.0);
}

TEST(Greedy, TiesGoToLowestFeature) {
  // Features 1 and 2 are copies; feature 0 is constant and never useful.
  const auto ds = BinDataset::from_rows({{1, 0, 0}, {1, 1, 1}}, {0, 1});
  EXPECT_EQ(greedy_upper_bound(ds).tree.nodes[0].feature, 1);
}

TEST(Greedy, SingleClassIsLeaf) {
  const auto g = greedy_upper_bound(BinDataset::from_rows({{0}, {1}}, {1, 1}, 2));
  EXPECT_EQ(g.ub, 1);
  EXPECT_EQ(g.tree.nodes[0].label, 1);
}

TEST(Greedy, RejectsConflicts) {
  EXPECT_THROW(greedy_upper_bound(BinDataset::from_rows({{0}, {0}}, {0, 1})), InseparableError);
}

TEST(Greedy, PureAndNoSmallerThanOptimum) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ds = testing::random_separable(rng, 5, 16, 3);
    const auto g = greedy_upper_bound(ds);
    g.tree.validate();
    EXPECT_EQ(evaluate(g.tree, ds), 1.0);
    EXPECT_EQ(static_cast<std::size_t>(g.ub), g.tree.size());
    EXPECT_GE(g.tree.size(), oracle::brute_force_mpdt(ds, kBudget).size);
  }
}

TEST(Greedy, Mux6AtLeastFifteen) {
  const auto g = greedy_upper_bound(load_mux6());
  EXPECT_GE(g.ub, 15);
  EXPECT_EQ(g.ub % 2, 1);
}

TEST(Filter, KeepsTiesWithBest) {
  const auto sel = BinDataset::from_rows({{0}, {1}}, {0, 1});
  const auto right = greedy_upper_bound(sel).tree;
  const auto leaf = DecisionTree::single_leaf(0, 1);
  const auto kept = filter_by_selection({leaf, right, leaf, right}, sel, 0.0);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].index, 1u);
  EXPECT_EQ(kept[1].index, 3u);
  EXPECT_EQ(filter_by_selection({leaf, right}, sel, 0.5).size(), 2u);
}

TEST(Config, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.p = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.k = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.delta = -0.1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.lb = 4;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Train, SingleClassShortCircuits) {
  const auto ds = BinDataset::from_rows({{0}, {1}, {0}, {1}, {1}}, {1, 1, 1, 1, 1}, 2);
  const auto r = train(ds, {});
  EXPECT_TRUE(r.short_circuit);
  EXPECT_EQ(r.size, 1u);
  EXPECT_EQ(r.model().nodes[0].label, 1);
  EXPECT_EQ(r.n_vars, 0u);
}

// Every returned tree is pure on the training rows and of optimum size.
TEST(Train, SolutionsArePureAndMinimal) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ds = testing::random_separable(rng, 5, 16, 3);
    TrainConfig cfg;
    cfg.k = 8;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto r = train_split(ds, ds, cfg);
    const auto opt = oracle::brute_force_mpdt(ds, kBudget).size;
    ASSERT_FALSE(r.solutions.empty());
    for (const auto& t : r.solutions) {
      t.validate();
      EXPECT_EQ(evaluate(t, ds), 1.0);
      EXPECT_EQ(t.size(), opt);
    }
    EXPECT_EQ(r.size, opt);
    if (!r.short_circuit) EXPECT_EQ(r.cost, (opt + 1) / 2);
  }
}

TEST(Train, KeptSetHoldsTheBestAccuracy) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto tr = testing::tree_labeled(rng, 5, 14, 3, 2);
    const auto sel = testing::tree_labeled(rng, 5, 10, 3, 2);
    if (!check_separability(tr).empty()) continue;
    const auto r = train_split(tr, sel, {});
    ASSERT_FALSE(r.kept.empty());
    double best = 0;
    for (double a : r.selection_accuracy) best = std::max(best, a);
    double kept_best = 0;
    for (const auto& k : r.kept) kept_best = std::max(kept_best, k.accuracy);
    EXPECT_EQ(kept_best, best);
    EXPECT_LT(r.chosen, r.kept.size());
  }
}

TEST(Train, Mux6) {
  const auto sp = stratified_split(load_mux6(), SplitSpec{});
  const auto r = train_split(sp.train, sp.selection, {});
  EXPECT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_EQ(r.size, 15u);
  EXPECT_EQ(r.cost, 8u);
  EXPECT_EQ(r.solutions.size(), 2u);
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(evaluate(r.model(), sp.train), 1.0);
  EXPECT_EQ(evaluate(r.model(), sp.test), 1.0);
}

TEST(Train, SameSeedSameResult) {
  const auto ds = load_mux6();
  TrainConfig cfg;
  cfg.seed = 3;
  const auto a = train(ds, cfg);
  const auto b = train(ds, cfg);
  EXPECT_EQ(a.model(), b.model());
  EXPECT_EQ(report_json(a).dump(), report_json(b).dump());
}

TEST(Train, TimeoutCarriesGreedyTree) {
  const auto ds = load_mux6();
  TrainConfig cfg;
  cfg.timeout_seconds = 1e-9;
  try {
    train(ds, cfg);
    FAIL() << "expected a timeout";
  } catch (const TrainTimeout& e) {
    EXPECT_GE(e.greedy.size(), 15u);
  }
  cfg.greedy_fallback = true;
  const auto r = train(ds, cfg);
  EXPECT_EQ(r.status, SolveStatus::kTimeout);
  EXPECT_EQ(r.size, static_cast<std::size_t>(r.ub));
}

}  // namespace
}  // namespace mpdt
