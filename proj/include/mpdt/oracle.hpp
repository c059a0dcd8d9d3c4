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

#ifndef MPDT_ORACLE_HPP_
#define MPDT_ORACLE_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "mpdt/cnf.hpp"
#include "mpdt/dataset.hpp"
#include "mpdt/tree.hpp"

// Exhaustive references, deliberately independent of the SAT machinery.
namespace mpdt::oracle {

struct Budget {
  std::size_t max_features = 6;
  std::size_t max_examples = 24;
  std::size_t max_tree_size = 11;
  int max_vars = 20;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MinimalTree {
  std::size_t size = 0;
  DecisionTree tree;
};

// Smallest pure tree, found by enumerating breadth-first layouts of
// increasing odd size together with their feature assignments.
MinimalTree brute_force_mpdt(const BinDataset& ds, const Budget& budget = {});

// Minimum falsified soft weight over assignments satisfying every hard
// clause; nullopt if there are none.
std::optional<std::uint64_t> brute_force_maxsat(const WcnfFormula& f,
                                                const Budget& budget = {});

}  // namespace mpdt::oracle

#endif  // MPDT_ORACLE_HPP_
