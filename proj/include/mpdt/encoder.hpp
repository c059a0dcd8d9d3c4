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

#ifndef MPDT_ENCODER_HPP_
#define MPDT_ENCODER_HPP_

#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "mpdt/cnf.hpp"
#include "mpdt/dataset.hpp"
#include "mpdt/tree.hpp"

namespace mpdt {

class InseparableError : public std::runtime_error {
 public:
  InseparableError(std::string what, std::vector<std::vector<std::size_t>> groups)
      : std::runtime_error(std::move(what)), groups(std::move(groups)) {}
  std::vector<std::vector<std::size_t>> groups;
};

// Nodes are numbered 1..n breadth-first; features 0..k-1. Accessors return 0
// for variables that do not exist (e.g. l(i, j) with j outside lr(i)).
class VariableLayout {
 public:
  VariableLayout() = default;
  VariableLayout(int n, int k, int n_classes, VarPool& pool);

  int n() const { return n_; }
  int k() const { return k_; }
  int n_classes() const { return n_classes_; }
  bool multilabel() const { return n_classes_ > 2; }

  // Candidate left / right children of node i.
  int lr_lo(int i) const { return i % 2 == 0 ? i + 2 : i + 1; }
  int lr_hi(int i) const { return std::min(2 * i, n_ - 1); }
  int rr_lo(int i) const { return lr_lo(i) + 1; }
  int rr_hi(int i) const { return std::min(2 * i + 1, n_); }
  std::vector<int> lr(int i) const;
  std::vector<int> rr(int i) const;

  Var v(int i) const { return v_[idx(i)]; }
  Var l(int i, int j) const;
  Var r(int i, int j) const;
  // Parent relation after substitution: l(i, j) for even j, r(i, j) for odd.
  Var p(int j, int i) const { return j % 2 == 0 ? l(i, j) : r(i, j); }
  Var eta_odd(int i) const { return eta_[idx(i)]; }
  Var eta(int i) const { return eta_odd(i % 2 == 0 ? i + 1 : i); }
  Var a(int r, int j) const { return a_[fidx(r, j)]; }
  Var u(int r, int j) const { return u_[fidx(r, j)]; }
  Var d0(int r, int j) const { return d0_[fidx(r, j)]; }
  Var d1(int r, int j) const { return d1_[fidx(r, j)]; }
  // Binary case: c(0, j) is "leaf j predicts class 1". Multilabel: one per class.
  Var c(int cls, int j) const { return c_[static_cast<std::size_t>(cls * n_ + j - 1)]; }
  // t in [0, ceil(i/2)] and [0, i] respectively; i in [1, n].
  Var lambda(int t, int i) const;
  Var tau(int t, int i) const;

  std::vector<Var> feature_vars() const { return a_; }
  nlohmann::json to_json() const;

 private:
  std::size_t idx(int i) const { return static_cast<std::size_t>(i); }
  std::size_t fidx(int r, int j) const { return static_cast<std::size_t>(r * n_ + j - 1); }

  int n_ = 0, k_ = 0, n_classes_ = 0;
  std::vector<Var> v_, eta_;
  std::vector<std::vector<Var>> l_;  // l_[i][j - lr_lo(i)]
  std::vector<std::vector<Var>> r_;
  std::vector<Var> a_, u_, d0_, d1_, c_;
  std::vector<std::vector<Var>> lambda_, tau_;
};

struct MpdtInstance {
  VariableLayout layout;
  WcnfFormula formula;
  int lb = 3;
  int ub = 3;
  std::size_t n_examples = 0;
};

// Partial MaxSAT instance whose optimum cost is ceil(|minimum pure tree| / 2)
// for trees of at most ub nodes.
MpdtInstance build(const BinDataset& ds, int ub, int lb = 3);

// Tree described by a model of the hard clauses. Throws std::logic_error if
// the model does not describe a well-formed tree.
DecisionTree decode(const MpdtInstance& inst, const std::vector<bool>& model);

// Number of used nodes in a model (largest odd i with eta_i, plus none).
int used_nodes(const MpdtInstance& inst, const std::vector<bool>& model);

}  // namespace mpdt

#endif  // MPDT_ENCODER_HPP_
