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

#include "mpdt/optimizer.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace mpdt {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t soft_cost(const std::vector<SoftClause>& soft, const std::vector<bool>& m) {
  std::uint64_t c = 0;
  for (const auto& s : soft) {
    if (!satisfies(m, s.lits)) c += s.weight;
  }
  return c;
}

// "Cost <= B" over relaxed soft clauses. Every soft clause is reduced to a
// literal that is true when the clause is violated (the literal itself for
// unit clauses, a fresh blocking variable otherwise); weights on the same
// literal are merged and complementary pairs are folded into a constant.
// Unit weights go through the incremental totalizer. Anything heavier, such as
// the accumulated diversity units of mdsol, goes through a weighted totalizer
// over the distinct literals: repeating a literal once per unit of weight
// grows the encoding with the total weight rather than the literal count.
class CostBound {
 public:
  CostBound(sat::Solver& solver, VarPool& pool, const std::vector<SoftClause>& soft,
            std::optional<Lit> guard)
      : solver_(solver), pool_(pool), guard_(guard) {
    std::map<Lit, std::uint64_t> weight;
    for (const auto& s : soft) {
      if (s.lits.empty()) {
        offset_ += s.weight;
      } else if (s.lits.size() == 1) {
        weight[~s.lits[0]] += s.weight;
      } else {
        const Lit b = Lit::pos(pool_.new_var());
        Clause c = s.lits;
        c.push_back(b);
        add(std::move(c));
        weight[b] += s.weight;
      }
    }
    for (auto& [lit, w] : weight) {
      if (lit.negative() || w == 0) continue;
      const auto it = weight.find(~lit);
      if (it == weight.end()) continue;
      const std::uint64_t common = std::min(w, it->second);
      offset_ += common;
      w -= common;
      it->second -= common;
    }
    for (const auto& [lit, w] : weight) {
      if (w == 0) continue;
      bad_.push_back({lit, w});
      total_ += w;
      unit_ = unit_ && w == 1;
    }
  }

  // Literals to assume so that cost <= b; nullopt if the bound is infeasible
  // on its face.
  std::optional<std::vector<Lit>> at_most(std::uint64_t b) {
    if (b < offset_) return std::nullopt;
    const std::uint64_t nb = b - offset_;
    if (nb >= total_) return std::vector<Lit>{};
    if (unit_) {
      if (!down_) {
        std::vector<Lit> lits;
        for (const auto& x : bad_) lits.push_back(x.lit);
        down_.emplace(lits, pool_);
      }
      auto a = down_->assume_at_most(static_cast<std::int64_t>(nb));
      for (auto& c : a.clauses) add(std::move(c));
      return std::vector<Lit>{a.literal};
    }
    // Count violated weight up to nb + 1, or satisfied weight up to
    // total - nb, whichever needs the smaller cap; diverse-solution objectives
    // are dominated by weight that is almost never satisfied, so the second
    // form is usually far smaller there.
    if (sums_.empty()) kind_ = total_ - nb < nb + 1 ? SumBound::kAtLeast : SumBound::kAtMost;
    if (kind_ == SumBound::kAtMost) {
      if (sums_.empty() || nb + 1 > cap_) rebuild(nb + 1);
      const auto it = std::upper_bound(sums_.begin(), sums_.end(), nb,
                                       [](std::uint64_t v, const auto& s) { return v < s.first; });
      if (it == sums_.end()) return std::vector<Lit>{};
      return std::vector<Lit>{~it->second};
    }
    const std::uint64_t need = total_ - nb;
    // Bounds tighten over a search; grow geometrically to limit rebuilds.
    if (sums_.empty() || need > cap_) rebuild(std::min(total_, std::max(need, 2 * cap_)));
    const auto it = std::lower_bound(sums_.begin(), sums_.end(), need,
                                     [](const auto& s, std::uint64_t v) { return s.first < v; });
    if (it == sums_.end()) return std::nullopt;
    return std::vector<Lit>{it->second};
  }

  // Asserts cost <= b permanently (b must be achievable).
  void commit(std::uint64_t b) {
    const auto lits = at_most(b);
    if (!lits) return;
    for (Lit l : *lits) solver_.add_clause({l});
  }

 private:
  void rebuild(std::uint64_t cap) {
    cap_ = cap;
    std::vector<Clause> cs;
    if (kind_ == SumBound::kAtMost) {
      sums_ = weighted_totalizer(bad_, cap_, pool_, cs, kind_);
    } else {
      std::vector<WeightedLit> good;
      for (const auto& x : bad_) good.push_back({~x.lit, x.weight});
      sums_ = weighted_totalizer(good, cap_, pool_, cs, kind_);
    }
    for (auto& c : cs) add(std::move(c));
  }

  void add(Clause c) {
    if (guard_) c.push_back(~*guard_);
    solver_.add_clause(c);
  }

  sat::Solver& solver_;
  VarPool& pool_;
  std::optional<Lit> guard_;
  std::uint64_t offset_ = 0;
  std::uint64_t total_ = 0;
  bool unit_ = true;
  std::vector<WeightedLit> bad_;
  std::optional<IncTotalizer> down_;
  std::uint64_t cap_ = 0;
  SumBound kind_ = SumBound::kAtMost;
  std::vector<std::pair<std::uint64_t, Lit>> sums_;
};

struct LmsResult {
  SolveStatus status = SolveStatus::kUnsat;
  std::uint64_t cost = 0;
  std::vector<bool> model;
  std::vector<Progress> trace;
};

// The loop shared by linear_maxsat and every mdsol round. With retain, each
// achieved bound is asserted; otherwise all auxiliary clauses hang off guard,
// which is assumed true throughout.
LmsResult lms(sat::Solver& solver, VarPool& pool, const std::vector<SoftClause>& soft,
              bool retain, std::optional<Lit> guard, const MaxSatOptions& opts,
              Clock::time_point start) {
  LmsResult out;
  std::uint64_t total = 0;
  for (const auto& s : soft) total += s.weight;
  std::uint64_t ub = total + 1;
  out.cost = ub;
  CostBound bound(solver, pool, soft, guard);
  solver.set_deadline(opts.deadline);

  while (ub > 0) {
    if (opts.deadline && Clock::now() >= *opts.deadline) {
      out.status = out.model.empty() ? SolveStatus::kTimeout : SolveStatus::kFeasible;
      return out;
    }
    auto assumptions = bound.at_most(ub - 1);
    if (!assumptions) break;
    if (guard) assumptions->push_back(*guard);
    const auto r = solver.solve(*assumptions);
    if (r == sat::Result::kInterrupted) {
      out.status = out.model.empty() ? SolveStatus::kTimeout : SolveStatus::kFeasible;
      return out;
    }
    if (r == sat::Result::kUnsat) break;
    out.model = solver.model();
    ub = soft_cost(soft, out.model);
    out.cost = ub;
    const Progress p{std::chrono::duration<double>(Clock::now() - start).count(), ub};
    out.trace.push_back(p);
    if (opts.on_improve) opts.on_improve(p);
    if (retain && ub < total) bound.commit(ub);
  }
  out.status = out.model.empty() ? SolveStatus::kUnsat : SolveStatus::kOptimal;
  return out;
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "OPTIMAL";
    case SolveStatus::kFeasible: return "FEASIBLE";
    case SolveStatus::kUnsat: return "UNSAT";
    case SolveStatus::kTimeout: return "TIMEOUT";
  }
  return "?";
}

SolveOutcome linear_maxsat(const WcnfFormula& f, const MaxSatOptions& opts) {
  const auto start = Clock::now();
  SolveOutcome out;
  sat::Options so;
  so.seed = opts.seed;
  out.solver = std::make_unique<sat::Solver>(so);
  out.pool = VarPool(f.n_vars);
  out.solver->ensure_var(f.n_vars);
  for (const auto& c : f.hard) out.solver->add_clause(c);
  auto r = lms(*out.solver, out.pool, f.soft, /*retain=*/true, std::nullopt, opts, start);
  out.status = r.status;
  out.cost = r.cost;
  out.model = std::move(r.model);
  out.trace = std::move(r.trace);
  return out;
}

DiverseSolutions mdsol(SolveOutcome& base, std::size_t k, std::span<const Var> vars,
                       const MaxSatOptions& opts) {
  const auto start = Clock::now();
  DiverseSolutions out;
  if (k == 0) return out;
  if (!base.solver) throw std::invalid_argument("mdsol needs the solver of a MaxSAT run");
  sat::Solver& solver = *base.solver;
  std::vector<SoftClause> soft;
  while (out.models.size() < k) {
    // Each round's relaxation and bound clauses are retired afterwards.
    const Lit guard = Lit::pos(base.pool.new_var());
    auto r = lms(solver, base.pool, soft, /*retain=*/false, guard, opts, start);
    solver.add_clause({~guard});
    if (r.status == SolveStatus::kUnsat) {
      out.exhausted = true;
      break;
    }
    if (r.status == SolveStatus::kTimeout) break;
    if (r.status == SolveStatus::kFeasible && !opts.accept_suboptimal_diverse) break;
    Clause blocking;
    for (Var v : vars) {
      const Lit l = r.model[static_cast<std::size_t>(v)] ? Lit::pos(v) : Lit::neg(v);
      blocking.push_back(~l);
      soft.push_back(SoftClause{{~l}, 1});
    }
    out.models.push_back(std::move(r.model));
    out.diversity_costs.push_back(r.cost);
    if (r.status == SolveStatus::kFeasible) break;
    solver.add_clause(blocking);
  }
  return out;
}

}  // namespace mpdt
