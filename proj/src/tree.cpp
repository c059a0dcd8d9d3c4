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

#include <sstream>
#include <stdexcept>

#include "mpdt/fileio.hpp"

namespace mpdt {

std::size_t DecisionTree::leaf_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.leaf ? 1 : 0;
  return n;
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    const auto& node = nodes[static_cast<std::size_t>(id)];
    if (node.leaf) {
      best = std::max(best, d);
    } else {
      stack.push_back({node.on1, d + 1});
      stack.push_back({node.on0, d + 1});
    }
  }
  return best;
}

int DecisionTree::predict(std::span<const std::uint8_t> x) const {
  if (x.size() != n_features) {
    throw std::invalid_argument("example has " + std::to_string(x.size()) +
                                " features, tree expects " + std::to_string(n_features));
  }
  const TreeNode* node = &nodes.at(static_cast<std::size_t>(root));
  while (!node->leaf) {
    const int next = x[static_cast<std::size_t>(node->feature)] ? node->on1 : node->on0;
    node = &nodes[static_cast<std::size_t>(next)];
  }
  return node->label;
}

void DecisionTree::validate() const {
  const auto n = static_cast<int>(nodes.size());
  if (n == 0) throw std::logic_error("tree has no nodes");
  if (root < 0 || root >= n) throw std::logic_error("root out of range");
  std::vector<int> parents(nodes.size(), 0);
  for (const auto& node : nodes) {
    if (node.leaf) continue;
    if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= n_features) {
      throw std::logic_error("feature out of range");
    }
    for (int child : {node.on1, node.on0}) {
      if (child < 0 || child >= n) throw std::logic_error("child out of range");
      ++parents[static_cast<std::size_t>(child)];
    }
  }
  for (int i = 0; i < n; ++i) {
    const int expected = i == root ? 0 : 1;
    if (parents[static_cast<std::size_t>(i)] != expected) {
      throw std::logic_error("node " + std::to_string(i) + " has " +
                             std::to_string(parents[static_cast<std::size_t>(i)]) +
                             " parents");
    }
  }
  // Reachability and the no-repeat rule in one walk; with unique parents a
  // cycle would leave some node unreached.
  std::size_t reached = 0;
  std::vector<std::pair<int, std::vector<bool>>> stack;
  stack.push_back({root, std::vector<bool>(n_features, false)});
  while (!stack.empty()) {
    auto [id, used] = std::move(stack.back());
    stack.pop_back();
    ++reached;
    const auto& node = nodes[static_cast<std::size_t>(id)];
    if (node.leaf) continue;
    if (used[static_cast<std::size_t>(node.feature)]) {
      throw std::logic_error("feature " + std::to_string(node.feature) +
                             " repeated on a path");
    }
    used[static_cast<std::size_t>(node.feature)] = true;
    stack.push_back({node.on1, used});
    stack.push_back({node.on0, std::move(used)});
  }
  if (reached != nodes.size()) throw std::logic_error("unreachable nodes");
}

DecisionTree DecisionTree::single_leaf(int label, std::size_t n_features) {
  DecisionTree t;
  t.nodes.push_back(TreeNode{true, -1, -1, -1, label});
  t.n_features = n_features;
  return t;
}

double evaluate(const DecisionTree& tree, const BinDataset& ds) {
  if (ds.n_rows() == 0) return 1.0;
  std::size_t correct = 0;
  for (std::size_t q = 0; q < ds.n_rows(); ++q) {
    correct += tree.predict(ds.row(q)) == ds.labels[q] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.n_rows());
}

nlohmann::json to_json(const DecisionTree& tree) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    nlohmann::json j{{"id", i}, {"kind", node.leaf ? "leaf" : "decision"}};
    if (node.leaf) {
      j["class"] = node.label;
    } else {
      j["feature"] = node.feature;
      j["on1"] = node.on1;
      j["on0"] = node.on0;
    }
    nodes.push_back(std::move(j));
  }
  return {{"n_features", tree.n_features}, {"nodes", std::move(nodes)}, {"root", tree.root}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
  DecisionTree t;
  try {
    t.root = j.at("root").get<int>();
    t.n_features = j.value("n_features", std::size_t{0});
    const auto& nodes = j.at("nodes");
    t.nodes.resize(nodes.size());
    std::size_t max_feature = 0;
    for (const auto& n : nodes) {
      const auto id = n.at("id").get<std::size_t>();
      if (id >= t.nodes.size()) throw std::invalid_argument("node id out of range");
      TreeNode& node = t.nodes[id];
      const auto kind = n.at("kind").get<std::string>();
      if (kind == "leaf") {
        node.label = n.at("class").get<int>();
      } else if (kind == "decision") {
        node.leaf = false;
        node.feature = n.at("feature").get<int>();
        node.on1 = n.at("on1").get<int>();
        node.on0 = n.at("on0").get<int>();
        max_feature = std::max(max_feature, static_cast<std::size_t>(node.feature) + 1);
      } else {
        throw std::invalid_argument("unknown node kind '" + kind + "'");
      }
    }
    if (!j.contains("n_features")) t.n_features = max_feature;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed tree: ") + e.what());
  }
  try {
    t.validate();
  } catch (const std::logic_error& e) {
    throw std::invalid_argument(std::string("malformed tree: ") + e.what());
  }
  return t;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const DecisionTree& tree, std::span<const FeatureSource> provenance,
                   std::span<const std::string> class_names) {
  std::ostringstream out;
  out << "digraph tree {\n  node [fontname=\"Helvetica\"];\n";
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    out << "  n" << i << " [";
    if (node.leaf) {
      out << "shape=box, label=\"";
      const auto c = static_cast<std::size_t>(node.label);
      if (c < class_names.size()) {
        out << dot_escape(class_names[c]);
      } else {
        out << "class " << node.label;
      }
    } else {
      out << "shape=ellipse, label=\"f" << node.feature;
      const auto f = static_cast<std::size_t>(node.feature);
      if (f < provenance.size()) {
        const auto& src = provenance[f];
        out << "\\n" << dot_escape(src.column_name);
        if (src.n_bits > 1) out << " bit " << src.bit;
      }
    }
    out << "\"];\n";
  }
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    if (node.leaf) continue;
    out << "  n" << i << " -> n" << node.on1 << " [label=\"1\"];\n";
    out << "  n" << i << " -> n" << node.on0 << " [label=\"0\"];\n";
  }
  out << "}\n";
  return out.str();
}

void export_tree(const DecisionTree& tree, ExportFormat format,
                 const std::filesystem::path& path, std::span<const FeatureSource> provenance,
                 std::span<const std::string> class_names) {
  write_file_atomic(path, format == ExportFormat::kDot
                              ? to_dot(tree, provenance, class_names)
                              : to_json(tree).dump(2) + "\n");
}

}  // namespace mpdt
