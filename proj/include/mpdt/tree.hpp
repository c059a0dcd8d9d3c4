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

#ifndef MPDT_TREE_HPP_
#define MPDT_TREE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mpdt/dataset.hpp"

namespace mpdt {

struct TreeNode {
  bool leaf = true;
  int feature = -1;  // decision nodes
  int on1 = -1;      // child followed when the feature is 1
  int on0 = -1;
  int label = 0;     // leaves
  bool operator==(const TreeNode&) const = default;
};

// Binary decision tree over bit-vector examples. Nodes are addressed by their
// index in nodes; the decoder and the greedy builder emit breadth-first order.
struct DecisionTree {
  std::vector<TreeNode> nodes;
  int root = 0;
  std::size_t n_features = 0;

  std::size_t size() const { return nodes.size(); }
  std::size_t leaf_count() const;
  std::size_t depth() const;

  int predict(std::span<const std::uint8_t> x) const;

  // Throws std::logic_error unless the nodes form a single tree rooted at
  // root, with features in range and no feature repeated along a path.
  void validate() const;

  static DecisionTree single_leaf(int label, std::size_t n_features);
  bool operator==(const DecisionTree&) const = default;
};

double evaluate(const DecisionTree& tree, const BinDataset& ds);

nlohmann::json to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const nlohmann::json& j);

// Graphviz digraph. Decision nodes are labeled with the originating column
// and bit when provenance is available; leaves with class names when given.
std::string to_dot(const DecisionTree& tree,
                   std::span<const FeatureSource> provenance = {},
                   std::span<const std::string> class_names = {});

enum class ExportFormat { kDot, kJson };

// Throws std::runtime_error if path cannot be written.
void export_tree(const DecisionTree& tree, ExportFormat format,
                 const std::filesystem::path& path,
                 std::span<const FeatureSource> provenance = {},
                 std::span<const std::string> class_names = {});

}  // namespace mpdt

#endif  // MPDT_TREE_HPP_
