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

#include "mpdt/tree.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "testing.hpp"

namespace mpdt {
namespace {

// Root tests feature 0: class 1 on 1, class 0 on 0.
DecisionTree stump() {
  DecisionTree t;
  t.n_features = 1;
  t.nodes.resize(3);
  t.nodes[0] = {false, 0, 2, 1, 0};
  t.nodes[1].label = 0;
  t.nodes[2].label = 1;
  return t;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

TEST(Tree, StumpShape) {
  const auto t = stump();
  t.validate();
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.leaf_count(), 2u);
  EXPECT_EQ(t.depth(), 1u);
}

TEST(Tree, PredictAndEvaluate) {
  const auto t = stump();
  const auto ds = BinDataset::from_rows({{0}, {1}}, {0, 1});
  EXPECT_EQ(evaluate(t, ds), 1.0);
  const auto balanced = BinDataset::from_rows({{0}, {1}, {0}, {1}}, {0, 0, 1, 1});
  EXPECT_EQ(evaluate(DecisionTree::single_leaf(0, 1), balanced), 0.5);
  const std::vector<std::uint8_t> wide{0, 1};
  EXPECT_THROW(t.predict(wide), std::invalid_argument);
}

TEST(Tree, ValidateRejectsBrokenTrees) {
  auto t = stump();
  t.nodes[0].on0 = 2;  // node 1 unreachable, node 2 has two parents
  EXPECT_THROW(t.validate(), std::logic_error);

  DecisionTree repeat;
  repeat.n_features = 1;
  repeat.nodes.resize(5);
  repeat.nodes[0] = {false, 0, 2, 1, 0};
  repeat.nodes[2] = {false, 0, 4, 3, 0};
  EXPECT_THROW(repeat.validate(), std::logic_error);

  auto out_of_range = stump();
  out_of_range.nodes[0].feature = 1;
  EXPECT_THROW(out_of_range.validate(), std::logic_error);
}

TEST(Tree, JsonRoundTrip) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_tree(rng, 6, 4, 3);
    t.validate();
    const auto back = tree_from_json(nlohmann::json::parse(to_json(t).dump()));
    EXPECT_EQ(back, t);
  }
}

TEST(Tree, JsonRejectsMalformed) {
  EXPECT_THROW(tree_from_json(nlohmann::json::parse("{}")), std::invalid_argument);
  auto j = to_json(stump());
  j["nodes"][0]["on1"] = 7;
  EXPECT_THROW(tree_from_json(j), std::invalid_argument);
}

// Descending never takes more steps than the depth, which is bounded by the
// number of decision nodes.
TEST(Tree, DepthBound) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = testing::random_tree(rng, 5, 5, 2);
    EXPECT_LE(t.depth(), (t.size() - 1) / 2);
    EXPECT_EQ(t.leaf_count(), (t.size() + 1) / 2);
  }
}

TEST(Dot, StumpHasThreeNodesTwoEdges) {
  const std::vector<FeatureSource> prov{{0, "colour", 1, 2}};
  const std::vector<std::string> names{"no", "yes"};
  const auto dot = to_dot(stump(), prov, names);
  EXPECT_EQ(count(dot, "shape="), 3u);
  EXPECT_EQ(count(dot, "->"), 2u);
  EXPECT_NE(dot.find("colour bit 1"), std::string::npos);
  EXPECT_NE(dot.find("\"yes\""), std::string::npos);
}

TEST(Dot, LeafOnly) {
  const auto dot = to_dot(DecisionTree::single_leaf(0, 3));
  EXPECT_EQ(count(dot, "shape="), 1u);
  EXPECT_EQ(count(dot, "->"), 0u);
}

TEST(Dot, EscapesQuotes) {
  const std::vector<std::string> names{"a\"b", "c"};
  EXPECT_NE(to_dot(stump(), {}, names).find("a\\\"b"), std::string::npos);
}

TEST(Export, WritesFilesAndRejectsBadPath) {
  const auto dir = std::filesystem::temp_directory_path() / "mpdt_tree_test";
  std::filesystem::create_directories(dir);
  export_tree(stump(), ExportFormat::kJson, dir / "t.json");
  std::ifstream in(dir / "t.json");
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(tree_from_json(nlohmann::json::parse(buf.str())), stump());
  export_tree(stump(), ExportFormat::kDot, dir / "t.dot");
  EXPECT_TRUE(std::filesystem::exists(dir / "t.dot"));
  EXPECT_THROW(export_tree(stump(), ExportFormat::kDot, dir / "missing" / "t.dot"),
               std::runtime_error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mpdt
