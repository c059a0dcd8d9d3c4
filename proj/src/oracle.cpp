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

#include "mpdt/oracle.hpp"

#include <bit>
#include <deque>
#include <limits>
#include <string>

namespace mpdt::oracle {
namespace {

using Mask = std::uint64_t;

struct Pending {
  Mask rows;
  std::uint32_t used;  // features tested on the path
  int id;
};

class LayoutSearch {
 public:
  explicit LayoutSearch(const BinDataset& ds) : ds_(ds) {
    for (std::size_t r = 0; r < ds.k; ++r) {
      Mask ones = 0;
      for (std::size_t q = 0; q < ds.n_rows(); ++q) {
        if (ds.value(q, r)) ones |= Mask{1} << q;
      }
      ones_.push_back(ones);
    }
  }

  bool run(std::size_t size, DecisionTree& out) {
    tree_ = DecisionTree{};
    tree_.n_features = ds_.k;
    tree_.nodes.push_back(TreeNode{});
    const Mask all = ds_.n_rows() == 64 ? ~Mask{0} : (Mask{1} << ds_.n_rows()) - 1;
    std::deque<Pending> queue{{all, 0, 0}};
    if (!expand(queue, static_cast<int>((size - 1) / 2))) return false;
    out = tree_;
    return true;
  }

 private:
  // Label shared by all rows in the set, -1 if mixed; 0 for the empty set.
  int pure_label(Mask rows) const {
    int label = -1;
    for (; rows != 0; rows &= rows - 1) {
      const int y = ds_.labels[static_cast<std::size_t>(std::countr_zero(rows))];
      if (label >= 0 && y != label) return -1;
      label = y;
    }
    return label < 0 ? 0 : label;
  }

  // Nodes are settled in breadth-first order: the front of the queue becomes
  // a leaf or a decision whose children join the back (0-branch first).
  bool expand(std::deque<Pending>& queue, int decisions_left) {
    if (queue.empty()) return decisions_left == 0;
    int impure = 0;
    for (const auto& p : queue) impure += pure_label(p.rows) < 0 ? 1 : 0;
    if (impure > decisions_left) return false;

    const Pending node = queue.front();
    queue.pop_front();
    const int label = pure_label(node.rows);
    auto& slot = tree_.nodes[static_cast<std::size_t>(node.id)];
    if (label >= 0) {
      slot = TreeNode{true, -1, -1, -1, label};
      if (expand(queue, decisions_left)) return true;
    }
    if (decisions_left > 0) {
      const int on0 = static_cast<int>(tree_.nodes.size());
      for (std::size_t r = 0; r < ds_.k; ++r) {
        if (node.used & (1u << r)) continue;
        tree_.nodes.resize(static_cast<std::size_t>(on0) + 2);
        tree_.nodes[static_cast<std::size_t>(node.id)] =
            TreeNode{false, static_cast<int>(r), on0 + 1, on0, 0};
        const std::uint32_t used = node.used | (1u << r);
        queue.push_back({node.rows & ~ones_[r], used, on0});
        queue.push_back({node.rows & ones_[r], used, on0 + 1});
        if (expand(queue, decisions_left - 1)) return true;
        queue.pop_back();
        queue.pop_back();
        tree_.nodes.resize(static_cast<std::size_t>(on0));
      }
    }
    queue.push_front(node);
    return false;
  }

  const BinDataset& ds_;
  std::vector<Mask> ones_;
  DecisionTree tree_;
};

}  // namespace

MinimalTree brute_force_mpdt(const BinDataset& ds, const Budget& budget) {
  if (ds.k > budget.max_features || ds.k > 32) {
    throw BudgetExceeded(std::to_string(ds.k) + " features exceed the oracle budget");
  }
  if (ds.n_rows() > budget.max_examples || ds.n_rows() > 64) {
    throw BudgetExceeded(std::to_string(ds.n_rows()) + " examples exceed the oracle budget");
  }
  if (!check_separability(ds).empty()) throw std::invalid_argument("dataset is not separable");
  LayoutSearch search(ds);
  MinimalTree out;
  for (std::size_t size = 1; size <= budget.max_tree_size; size += 2) {
    if (search.run(size, out.tree)) {
      out.size = size;
      return out;
    }
  }
  throw BudgetExceeded("no pure tree with at most " + std::to_string(budget.max_tree_size) +
                       " nodes");
}

std::optional<std::uint64_t> brute_force_maxsat(const WcnfFormula& f, const Budget& budget) {
  if (f.n_vars > budget.max_vars || f.n_vars > 30) {
    throw BudgetExceeded(std::to_string(f.n_vars) + " variables exceed the oracle budget");
  }
  // Clause c is satisfied by assignment bits a iff (a & pos) | (~a & neg).
  struct Masks {
    std::uint32_t pos = 0, neg = 0;
  };
  auto masks = [](const Clause& c) {
    Masks m;
    for (Lit l : c) (l.negative() ? m.neg : m.pos) |= 1u << (l.var() - 1);
    return m;
  };
  std::vector<Masks> hard, soft;
  for (const auto& c : f.hard) hard.push_back(masks(c));
  for (const auto& s : f.soft) soft.push_back(masks(s.lits));
  std::optional<std::uint64_t> best;
  const std::uint32_t end = 1u << f.n_vars;
  for (std::uint32_t a = 0; a < end; ++a) {
    bool ok = true;
    for (const auto& m : hard) {
      if (((a & m.pos) | (~a & m.neg)) == 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    std::uint64_t cost = 0;
    for (std::size_t i = 0; i < soft.size(); ++i) {
      if (((a & soft[i].pos) | (~a & soft[i].neg)) == 0) cost += f.soft[i].weight;
    }
    if (!best || cost < *best) best = cost;
  }
  return best;
}

}  // namespace mpdt::oracle
