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

#include "mpdt/encoder.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace mpdt {
namespace {

int ceil_half(int i) { return (i + 1) / 2; }

// A literal or a constant; clauses containing a true term are dropped and
// false terms are omitted.
struct Term {
  Lit lit;
  int constant = -1;  // -1: literal, 0: false, 1: true
  Term operator~() const { return constant < 0 ? Term{~lit, -1} : Term{lit, 1 - constant}; }
};
Term pos(Var v) { return v == 0 ? Term{Lit(), 0} : Term{Lit::pos(v), -1}; }
Term neg(Var v) { return ~pos(v); }
constexpr Term kTrue{Lit(), 1};
constexpr Term kFalse{Lit(), 0};

class Emitter {
 public:
  Emitter(std::vector<Clause>& out, VarPool& pool) : out_(out), pool_(pool) {}

  void add(std::initializer_list<Term> terms) { add(std::vector<Term>(terms)); }
  void add(const std::vector<Term>& terms) {
    Clause c;
    for (const Term& t : terms) {
      if (t.constant == 1) return;
      if (t.constant < 0) c.push_back(t.lit);
    }
    out_.push_back(std::move(c));
  }
  // guard -> exactly one of vars (guard given as the negated literals that
  // are appended to every clause).
  void exactly_one_if(const std::vector<Var>& vars, const std::vector<Term>& off) {
    std::vector<Lit> lits;
    for (Var x : vars) {
      if (x != 0) lits.push_back(Lit::pos(x));
    }
    if (lits.empty()) {
      add(off);
      return;
    }
    for (Clause c : exactly_one(lits, pool_)) {
      std::vector<Term> terms(off);
      for (Lit l : c) terms.push_back(Term{l, -1});
      add(terms);
    }
  }
  VarPool& pool() { return pool_; }

 private:
  std::vector<Clause>& out_;
  VarPool& pool_;
};

}  // namespace

VariableLayout::VariableLayout(int n, int k, int n_classes, VarPool& pool)
    : n_(n), k_(k), n_classes_(n_classes) {
  const auto N = static_cast<std::size_t>(n);
  v_.assign(N + 1, 0);
  eta_.assign(N + 1, 0);
  l_.resize(N + 1);
  r_.resize(N + 1);
  for (int i = 1; i <= n; ++i) v_[idx(i)] = pool.new_var();
  for (int i = 1; i <= n; i += 2) eta_[idx(i)] = pool.new_var();
  for (int i = 1; i <= n; ++i) {
    for (int j = lr_lo(i); j <= lr_hi(i); j += 2) l_[idx(i)].push_back(pool.new_var());
    for (int j = rr_lo(i); j <= rr_hi(i); j += 2) r_[idx(i)].push_back(pool.new_var());
  }
  const auto F = static_cast<std::size_t>(k) * N;
  for (auto* table : {&a_, &u_, &d0_, &d1_}) {
    table->resize(F);
    for (auto& x : *table) x = pool.new_var();
  }
  c_.resize(static_cast<std::size_t>(multilabel() ? n_classes : 1) * N);
  for (auto& x : c_) x = pool.new_var();
  lambda_.resize(N + 1);
  tau_.resize(N + 1);
  for (int i = 1; i <= n; ++i) {
    for (int t = 0; t <= ceil_half(i); ++t) lambda_[idx(i)].push_back(pool.new_var());
    for (int t = 0; t <= i; ++t) tau_[idx(i)].push_back(pool.new_var());
  }
}

std::vector<int> VariableLayout::lr(int i) const {
  std::vector<int> out;
  for (int j = lr_lo(i); j <= lr_hi(i); j += 2) out.push_back(j);
  return out;
}

std::vector<int> VariableLayout::rr(int i) const {
  std::vector<int> out;
  for (int j = rr_lo(i); j <= rr_hi(i); j += 2) out.push_back(j);
  return out;
}

Var VariableLayout::l(int i, int j) const {
  if (i < 1 || i > n_ || j % 2 != 0 || j < lr_lo(i) || j > lr_hi(i)) return 0;
  return l_[idx(i)][static_cast<std::size_t>((j - lr_lo(i)) / 2)];
}

Var VariableLayout::r(int i, int j) const {
  if (i < 1 || i > n_ || j % 2 != 1 || j < rr_lo(i) || j > rr_hi(i)) return 0;
  return r_[idx(i)][static_cast<std::size_t>((j - rr_lo(i)) / 2)];
}

Var VariableLayout::lambda(int t, int i) const {
  if (i < 1 || i > n_ || t < 0 || t > ceil_half(i)) return 0;
  return lambda_[idx(i)][static_cast<std::size_t>(t)];
}

Var VariableLayout::tau(int t, int i) const {
  if (i < 1 || i > n_ || t < 0 || t > i) return 0;
  return tau_[idx(i)][static_cast<std::size_t>(t)];
}

nlohmann::json VariableLayout::to_json() const {
  using nlohmann::json;
  json j{{"n", n_}, {"k", k_}, {"n_classes", n_classes_}};
  json v = json::array(), eta = json::object(), l = json::array(), r = json::array();
  for (int i = 1; i <= n_; ++i) {
    v.push_back(this->v(i));
    if (i % 2 == 1) eta[std::to_string(i)] = eta_odd(i);
    for (int c : lr(i)) l.push_back({i, c, this->l(i, c)});
    for (int c : rr(i)) r.push_back({i, c, this->r(i, c)});
  }
  j["v"] = v;
  j["eta"] = eta;
  j["l"] = l;
  j["r"] = r;
  auto matrix = [&](auto get) {
    json m = json::array();
    for (int f = 0; f < k_; ++f) {
      json row = json::array();
      for (int node = 1; node <= n_; ++node) row.push_back(get(f, node));
      m.push_back(row);
    }
    return m;
  };
  j["a"] = matrix([&](int f, int node) { return a(f, node); });
  j["u"] = matrix([&](int f, int node) { return u(f, node); });
  j["d0"] = matrix([&](int f, int node) { return d0(f, node); });
  j["d1"] = matrix([&](int f, int node) { return d1(f, node); });
  json c = json::array();
  for (int cls = 0; cls < (multilabel() ? n_classes_ : 1); ++cls) {
    json row = json::array();
    for (int node = 1; node <= n_; ++node) row.push_back(this->c(cls, node));
    c.push_back(row);
  }
  j["c"] = c;
  json lam = json::array(), ta = json::array();
  for (int i = 1; i <= n_; ++i) {
    for (int t = 0; t <= ceil_half(i); ++t) lam.push_back({t, i, lambda(t, i)});
    for (int t = 0; t <= i; ++t) ta.push_back({t, i, tau(t, i)});
  }
  j["lambda"] = lam;
  j["tau"] = ta;
  return j;
}

MpdtInstance build(const BinDataset& ds, int ub, int lb) {
  if (lb < 3 || lb % 2 == 0) {
    throw std::invalid_argument("lower bound must be odd and at least 3, got " +
                                std::to_string(lb));
  }
  if (ub % 2 == 0) throw std::invalid_argument("upper bound must be odd, got " + std::to_string(ub));
  if (ub < lb) {
    throw std::invalid_argument("upper bound " + std::to_string(ub) +
                                " is below the lower bound " + std::to_string(lb));
  }
  if (auto groups = check_separability(ds); !groups.empty()) {
    throw InseparableError("dataset has " + std::to_string(groups.size()) +
                               " groups of identical examples with different labels",
                           std::move(groups));
  }

  MpdtInstance inst;
  inst.lb = lb;
  inst.ub = ub;
  inst.n_examples = ds.n_rows();
  VarPool pool;
  const int n = ub;
  const int k = static_cast<int>(ds.k);
  const int n_classes = static_cast<int>(std::max<std::size_t>(ds.n_classes, 2));
  inst.layout = VariableLayout(n, k, n_classes, pool);
  const VariableLayout& L = inst.layout;
  Emitter e(inst.formula.hard, pool);
  auto eta = [&](int i) { return pos(L.eta(i)); };

  // Node usage.
  for (int i = 3; i <= n; i += 2) {
    e.add({eta(i), neg(L.v(i))});
    e.add({eta(i), neg(L.v(i - 1))});
    e.add({~eta(i), eta(i - 2)});
  }
  e.add({eta(lb)});

  // Tree layout.
  e.add({neg(L.v(1))});
  for (int i = 1; i <= n; ++i) {
    const auto left = L.lr(i);
    if (left.empty()) {
      e.add({~eta(i), pos(L.v(i))});
    } else {
      for (int j : left) e.add({neg(L.v(i)), neg(L.l(i, j))});
    }
    for (int j : left) {
      e.add({neg(L.l(i, j)), pos(L.r(i, j + 1))});
      e.add({pos(L.l(i, j)), neg(L.r(i, j + 1))});
      // A used decision node only points at used nodes.
      e.add({neg(L.l(i, j)), eta(j)});
    }
    std::vector<Var> lefts;
    for (int j : left) lefts.push_back(L.l(i, j));
    e.exactly_one_if(lefts, {pos(L.v(i)), ~eta(i)});
  }
  for (int j = 2; j <= n; ++j) {
    std::vector<Var> parents;
    for (int i = j / 2; i <= j - 1; ++i) parents.push_back(L.p(j, i));
    e.exactly_one_if(parents, {~eta(j)});
  }

  // Feature assignment.
  for (int r = 0; r < k; ++r) {
    e.add({neg(L.d0(r, 1))});
    e.add({neg(L.d1(r, 1))});
    e.add({neg(L.a(r, 1)), pos(L.u(r, 1))});
    e.add({neg(L.u(r, 1)), pos(L.a(r, 1))});
    for (int j = 2; j <= n; ++j) {
      const bool right = j % 2 == 1;
      std::vector<Term> any_parent_d0{neg(L.d0(r, j))};
      std::vector<Term> any_parent_d1{neg(L.d1(r, j))};
      std::vector<Term> any_parent_u{neg(L.u(r, j)), pos(L.a(r, j))};
      for (int i = j / 2; i <= j - 1; ++i) {
        const Term p = pos(L.p(j, i));
        if (p.constant == 0) continue;
        any_parent_d0.push_back(p);
        any_parent_d1.push_back(p);
        any_parent_u.push_back(p);
        // Going right excludes value 0 at feature a(r, i); going left, value 1.
        const Var d_via = right ? L.d0(r, j) : L.d1(r, j);
        e.add({~p, neg(L.a(r, i)), pos(d_via)});
        e.add({~p, neg(L.d0(r, i)), pos(L.d0(r, j))});
        e.add({~p, neg(L.d1(r, i)), pos(L.d1(r, j))});
        if (right) {
          e.add({~p, neg(L.d0(r, j)), pos(L.a(r, i)), pos(L.d0(r, i))});
          e.add({~p, neg(L.d1(r, j)), pos(L.d1(r, i))});
        } else {
          e.add({~p, neg(L.d0(r, j)), pos(L.d0(r, i))});
          e.add({~p, neg(L.d1(r, j)), pos(L.a(r, i)), pos(L.d1(r, i))});
        }
        e.add({neg(L.u(r, i)), ~p, neg(L.a(r, j))});
        e.add({neg(L.u(r, i)), ~p, pos(L.u(r, j))});
        e.add({neg(L.u(r, j)), ~p, pos(L.a(r, j)), pos(L.u(r, i))});
      }
      e.add(any_parent_d0);
      e.add(any_parent_d1);
      e.add(any_parent_u);
      e.add({neg(L.a(r, j)), pos(L.u(r, j))});
    }
  }
  for (int j = 1; j <= n; ++j) {
    std::vector<Var> features;
    for (int r = 0; r < k; ++r) features.push_back(L.a(r, j));
    e.exactly_one_if(features, {pos(L.v(j)), ~eta(j)});
    for (int r = 0; r < k; ++r) {
      e.add({neg(L.v(j)), neg(L.a(r, j))});
      // Unused nodes carry no feature.
      e.add({eta(j), neg(L.a(r, j))});
    }
  }

  // Purity: an example must be excluded from every leaf labeled with another
  // class. Duplicate examples yield identical clauses and are skipped.
  std::set<std::pair<std::vector<std::uint8_t>, int>> seen;
  for (std::size_t q = 0; q < ds.n_rows(); ++q) {
    const auto row = ds.row(q);
    if (!seen.emplace(std::vector<std::uint8_t>(row.begin(), row.end()), ds.labels[q]).second) {
      continue;
    }
    const int y = ds.labels[q];
    for (int j = 1; j <= n; ++j) {
      std::vector<Term> clause{neg(L.v(j))};
      if (L.multilabel()) {
        clause.push_back(pos(L.c(y, j)));
      } else {
        clause.push_back(y == 1 ? pos(L.c(0, j)) : neg(L.c(0, j)));
      }
      for (int r = 0; r < k; ++r) {
        clause.push_back(pos(row[static_cast<std::size_t>(r)] ? L.d1(r, j) : L.d0(r, j)));
      }
      e.add(clause);
    }
  }
  if (L.multilabel()) {
    for (int j = 1; j <= n; ++j) {
      std::vector<Var> classes;
      for (int c = 0; c < n_classes; ++c) {
        e.add({pos(L.v(j)), neg(L.c(c, j))});
        classes.push_back(L.c(c, j));
      }
      e.exactly_one_if(classes, {neg(L.v(j))});
    }
  }

  // Pruning counters: lambda counts used leaves, tau used decision nodes.
  auto lam = [&](int t, int i) {
    if (i == 0) return t == 0 ? kTrue : kFalse;
    return pos(L.lambda(t, i));
  };
  auto ta = [&](int t, int i) {
    if (i == 0) return t == 0 ? kTrue : kFalse;
    return pos(L.tau(t, i));
  };
  for (int i = 1; i <= n; ++i) {
    e.add({lam(0, i)});
    e.add({ta(0, i)});
    const Term leaf = pos(L.v(i));
    for (int t = 1; t <= ceil_half(i); ++t) {
      const Term self = lam(t, i), prev = lam(t, i - 1), less = lam(t - 1, i - 1);
      e.add({~prev, self});
      e.add({~less, ~leaf, ~eta(i), self});
      e.add({~self, prev, less});
      e.add({~self, prev, leaf});
      e.add({~self, prev, eta(i)});
    }
    for (int t = 1; t <= i; ++t) {
      const Term self = ta(t, i), prev = ta(t, i - 1), less = ta(t - 1, i - 1);
      e.add({~prev, self});
      e.add({~less, leaf, ~eta(i), self});
      e.add({~self, prev, less});
      e.add({~self, prev, ~leaf});
      e.add({~self, prev, eta(i)});
    }
    for (int t = 1; t <= ceil_half(i); ++t) {
      const int j = 2 * (i - t + 1);
      if (L.l(i, j) != 0) e.add({~lam(t, i), neg(L.l(i, j))});
      if (L.r(i, j + 1) != 0) e.add({~lam(t, i), neg(L.r(i, j + 1))});
    }
    for (int t = ceil_half(i); t <= i; ++t) {
      const int j = 2 * (t - 1);
      if (L.l(i, j) != 0) e.add({~ta(t, i), neg(L.l(i, j))});
      if (L.r(i, 2 * t - 1) != 0) e.add({~ta(t, i), neg(L.r(i, 2 * t - 1))});
    }
  }

  for (int i = 1; i <= n; i += 2) {
    inst.formula.soft.push_back(SoftClause{{Lit::neg(L.eta_odd(i))}, 1});
  }
  inst.formula.n_vars = pool.last();
  return inst;
}

int used_nodes(const MpdtInstance& inst, const std::vector<bool>& model) {
  int used = 0;
  for (int i = 1; i <= inst.layout.n(); i += 2) {
    if (model[static_cast<std::size_t>(inst.layout.eta_odd(i))]) used = i;
  }
  return used;
}

DecisionTree decode(const MpdtInstance& inst, const std::vector<bool>& model) {
  const VariableLayout& L = inst.layout;
  auto val = [&](Var x) { return x != 0 && model.at(static_cast<std::size_t>(x)); };
  auto fail = [](const std::string& what) {
    throw std::logic_error("model does not describe a tree: " + what);
  };
  const int s = used_nodes(inst, model);
  if (s < 1) fail("no node is used");
  DecisionTree tree;
  tree.n_features = static_cast<std::size_t>(L.k());
  tree.nodes.resize(static_cast<std::size_t>(s));
  for (int i = 1; i <= s; ++i) {
    TreeNode& node = tree.nodes[static_cast<std::size_t>(i - 1)];
    if (val(L.v(i))) {
      node.leaf = true;
      if (L.multilabel()) {
        int label = -1;
        for (int c = 0; c < L.n_classes(); ++c) {
          if (!val(L.c(c, i))) continue;
          if (label >= 0) fail("leaf " + std::to_string(i) + " has two classes");
          label = c;
        }
        if (label < 0) fail("leaf " + std::to_string(i) + " has no class");
        node.label = label;
      } else {
        node.label = val(L.c(0, i)) ? 1 : 0;
      }
      continue;
    }
    node.leaf = false;
    for (int r = 0; r < L.k(); ++r) {
      if (!val(L.a(r, i))) continue;
      if (node.feature >= 0) fail("node " + std::to_string(i) + " has two features");
      node.feature = r;
    }
    if (node.feature < 0) fail("decision node " + std::to_string(i) + " has no feature");
    int left = 0;
    for (int j : L.lr(i)) {
      if (!val(L.l(i, j))) continue;
      if (left != 0) fail("node " + std::to_string(i) + " has two left children");
      left = j;
    }
    if (left == 0 || left + 1 > s) fail("node " + std::to_string(i) + " lacks used children");
    if (!val(L.r(i, left + 1))) fail("left/right children of " + std::to_string(i) + " disagree");
    node.on0 = left - 1;
    node.on1 = left;
  }
  try {
    tree.validate();
  } catch (const std::logic_error& err) {
    fail(err.what());
  }
  return tree;
}

}  // namespace mpdt
