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

#ifndef MPDT_SAT_HPP_
#define MPDT_SAT_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mpdt/cnf.hpp"

namespace mpdt::sat {

enum class Result { kSat, kUnsat, kInterrupted };

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

struct Stats {
  std::uint64_t solves = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt_literals = 0;
};

struct Options {
  std::uint64_t seed = 0;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  // Probability of a random branching decision; 0 keeps pure VSIDS.
  double random_var_freq = 0.0;
  int restart_base = 100;
};

// Incremental CDCL solver: two-watched-literal propagation, first-UIP
// learning with recursive minimization, VSIDS with phase saving, Luby
// restarts, activity-based learnt clause reduction and assumptions.
class Solver {
 public:
  explicit Solver(Options options = {});

  // Grows the variable table so that v is a valid variable.
  void ensure_var(Var v);
  int num_vars() const { return static_cast<int>(assigns_.size()) - 1; }
  std::size_t num_clauses() const { return num_original_; }
  std::size_t num_learnts() const { return learnts_.size(); }

  // Adds a permanent clause. Returns false once the database is known to be
  // unsatisfiable; adding the empty clause makes this permanent.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }
  bool okay() const { return ok_; }

  Result solve(std::span<const Lit> assumptions = {});
  Result solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  // Total assignment from the last SAT answer (slot 0 unused). Throws
  // std::logic_error unless the last solve returned kSat.
  const std::vector<bool>& model() const;
  bool model_value(Var v) const { return model()[static_cast<std::size_t>(v)]; }

  // After an UNSAT answer under assumptions: the subset of (negated)
  // assumptions responsible.
  const std::vector<Lit>& final_conflict() const { return conflict_; }

  void set_deadline(Deadline d) { deadline_ = d; }
  void set_conflict_budget(std::optional<std::uint64_t> b) { budget_ = b; }

  const Stats& stats() const { return stats_; }

 private:
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xffffffffu;

  enum : std::int8_t { kTrue = 0, kFalse = 1, kUndef = 2 };

  struct ClauseData {
    std::vector<Lit> lits;
    float activity = 0;
    bool learnt = false;
    bool deleted = false;
    std::uint32_t lbd = 0;
  };
  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  std::int8_t value(Lit l) const {
    const std::int8_t a = assigns_[static_cast<std::size_t>(l.var())];
    if (a == kUndef) return a;
    return static_cast<std::int8_t>(a ^ (l.negative() ? 1 : 0));
  }
  int level(Var v) const { return level_[static_cast<std::size_t>(v)]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  CRef alloc_clause(std::vector<Lit> lits, bool learnt);
  void attach(CRef cr);
  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel,
               std::uint32_t& out_lbd);
  bool lit_redundant(Lit p, std::uint32_t abstract_levels);
  void analyze_final(Lit p);
  void cancel_until(int lvl);
  Lit pick_branch();
  // nullopt signals a restart.
  std::optional<Result> search(std::int64_t conflict_limit);
  void reduce_db();
  void rebuild_watches();
  bool simplify_at_root();
  bool locked(CRef cr) const;
  bool out_of_budget() const;

  void var_bump(Var v);
  void var_decay() { var_inc_ /= options_.var_decay; }
  void clause_bump(ClauseData& c);
  void clause_decay() { cla_inc_ /= options_.clause_decay; }

  // Binary max-heap of variables keyed by activity.
  void heap_insert(Var v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  Var heap_pop();
  bool heap_contains(Var v) const { return heap_index_[static_cast<std::size_t>(v)] >= 0; }
  double next_random();

  Options options_;
  bool ok_ = true;
  std::vector<ClauseData> clauses_;
  std::vector<CRef> free_slots_;
  std::vector<CRef> learnts_;
  std::size_t num_original_ = 0;
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal code

  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<bool> polarity_;  // saved phase: true means negative
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<Var> heap_;
  std::vector<int> heap_index_;

  std::vector<std::int8_t> seen_;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_toclear_;

  std::vector<Lit> assumptions_;
  std::vector<Lit> conflict_;
  std::vector<bool> model_;
  bool model_valid_ = false;

  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  std::size_t simp_trail_size_ = 0;
  std::uint64_t rng_state_;

  Deadline deadline_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t budget_base_ = 0;
  Stats stats_;
};

}  // namespace mpdt::sat

#endif  // MPDT_SAT_HPP_
