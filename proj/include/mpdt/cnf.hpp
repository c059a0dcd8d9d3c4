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

#ifndef MPDT_CNF_HPP_
#define MPDT_CNF_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpdt {

// Propositional variables are 1-based, as in DIMACS.
using Var = int;

class Lit {
 public:
  constexpr Lit() = default;

  static constexpr Lit pos(Var v) { return Lit(2 * v); }
  static constexpr Lit neg(Var v) { return Lit(2 * v + 1); }
  static Lit from_dimacs(int x);
  static constexpr Lit from_code(int code) { return Lit(code); }

  constexpr Var var() const { return code_ >> 1; }
  constexpr bool negative() const { return (code_ & 1) != 0; }
  constexpr int code() const { return code_; }
  constexpr int to_dimacs() const { return negative() ? -var() : var(); }
  constexpr bool valid() const { return code_ >= 2; }

  constexpr Lit operator~() const { return Lit(code_ ^ 1); }
  constexpr auto operator<=>(const Lit&) const = default;

  // True if the literal is satisfied by the given total assignment
  // (indexed by variable, slot 0 unused).
  bool holds(const std::vector<bool>& assignment) const {
    return assignment[static_cast<std::size_t>(var())] != negative();
  }

 private:
  constexpr explicit Lit(int code) : code_(code) {}
  int code_ = 0;
};

using Clause = std::vector<Lit>;

bool satisfies(const std::vector<bool>& assignment, const Clause& clause);

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Issues fresh variable indices, strictly increasing from 1.
class VarPool {
 public:
  VarPool() = default;
  explicit VarPool(Var last_issued) : last_(last_issued) {}

  Var new_var() { return ++last_; }
  Var last() const { return last_; }
  // Marks every index up to v as issued.
  void reserve_through(Var v) {
    if (v > last_) last_ = v;
  }

 private:
  Var last_ = 0;
};

struct SoftClause {
  Clause lits;
  std::uint64_t weight = 1;

  bool operator==(const SoftClause&) const = default;
};

struct WcnfFormula {
  std::vector<Clause> hard;
  std::vector<SoftClause> soft;
  int n_vars = 0;

  std::uint64_t total_soft_weight() const;
  // Weight used for hard clauses in the classic format.
  std::uint64_t top() const { return total_soft_weight() + 1; }
  // Sum of weights of soft clauses falsified by the assignment.
  std::uint64_t cost(const std::vector<bool>& assignment) const;
  bool hard_satisfied(const std::vector<bool>& assignment) const;
  // Throws FormatError if a literal exceeds n_vars or a weight is zero.
  void validate() const;
};

// Clauses satisfiable exactly when one literal of lits is true. Pairwise
// up to pairwise_threshold literals, sequential (ladder) encoding above.
std::vector<Clause> exactly_one(std::span<const Lit> lits, VarPool& pool,
                                std::size_t pairwise_threshold = 6);
std::vector<Clause> at_most_one(std::span<const Lit> lits, VarPool& pool,
                                std::size_t pairwise_threshold = 6);

// Incremental totalizer: a cardinality network over the inputs whose
// output[j] is implied true whenever at least j+1 inputs are true. Outputs
// are materialized lazily up to the first requested bound, which suffices
// because bounds only decrease.
class IncTotalizer {
 public:
  IncTotalizer(std::vector<Lit> inputs, VarPool& pool);

  std::size_t input_count() const { return inputs_.size(); }
  // Bound currently enforced; starts at input_count() (no restriction).
  std::size_t bound() const { return bound_; }
  const std::vector<Lit>& outputs() const { return outputs_; }

  // Permanently tightens the bound to b: returns newly materialized
  // definitional clauses followed by the unit clause (~output[b]).
  std::vector<Clause> update(std::int64_t b);

  // Materializes what is needed to express "at most b" and returns the new
  // definitional clauses; the bound is not recorded and ~output[b] is left
  // to the caller (typically as a solver assumption).
  struct Assumption {
    std::vector<Clause> clauses;
    Lit literal;
  };
  Assumption assume_at_most(std::int64_t b);

 private:
  std::vector<Clause> materialize(std::size_t cap);
  std::vector<Lit> build(std::size_t lo, std::size_t hi, std::size_t cap,
                         std::vector<Clause>& out);
  void check_bound(std::int64_t b) const;

  std::vector<Lit> inputs_;
  VarPool* pool_;
  std::vector<Lit> outputs_;
  std::size_t bound_;
};

struct WeightedLit {
  Lit lit;
  std::uint64_t weight = 1;
};

enum class SumBound { kAtMost, kAtLeast };

// Weighted totalizer ("generalized totalizer"). Returns (s, o_s) for every
// distinct subset sum s of the input weights, sums above cap merged into cap,
// in increasing s; clauses go to out. With kAtMost, if the true inputs weigh
// S then every o_s with s <= min(S, cap) is forced, so assuming ~o_s forbids
// S >= s. With kAtLeast, o_s can only hold when S >= s, so assuming o_s
// enforces it.
std::vector<std::pair<std::uint64_t, Lit>> weighted_totalizer(
    std::span<const WeightedLit> inputs, std::uint64_t cap, VarPool& pool,
    std::vector<Clause>& out, SumBound kind = SumBound::kAtMost);

// Classic "p wcnf n_vars n_clauses top" format; hard clauses carry top.
void write_wcnf(const WcnfFormula& f, std::ostream& out);
WcnfFormula read_wcnf(std::istream& in);
void write_wcnf(const WcnfFormula& f, const std::filesystem::path& path);
WcnfFormula read_wcnf(const std::filesystem::path& path);

struct CnfFormula {
  std::vector<Clause> clauses;
  int n_vars = 0;
};
void write_dimacs(const CnfFormula& f, std::ostream& out);
CnfFormula read_dimacs(std::istream& in);

}  // namespace mpdt

#endif  // MPDT_CNF_HPP_
