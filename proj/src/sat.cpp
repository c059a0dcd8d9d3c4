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

#include "mpdt/sat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpdt::sat {

namespace {

// Luby sequence value y^k for the i-th restart (0-based), y = 2.
double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

std::uint32_t abstract_level(int level) { return 1u << (level & 31); }

}  // namespace

Solver::Solver(Options options)
    : options_(options), rng_state_(options.seed * 0x9E3779B97F4A7C15ull + 1) {
  // Slot 0 is a placeholder so variables index directly.
  assigns_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  polarity_.push_back(true);
  activity_.push_back(0);
  heap_index_.push_back(-1);
  seen_.push_back(0);
  watches_.resize(2);
}

double Solver::next_random() {
  rng_state_ ^= rng_state_ << 13;
  rng_state_ ^= rng_state_ >> 7;
  rng_state_ ^= rng_state_ << 17;
  return static_cast<double>(rng_state_ >> 11) * 0x1.0p-53;
}

void Solver::ensure_var(Var v) {
  while (num_vars() < v) {
    const Var nv = num_vars() + 1;
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    polarity_.push_back(true);
    activity_.push_back(0);
    heap_index_.push_back(-1);
    seen_.push_back(0);
    watches_.resize(watches_.size() + 2);
    heap_insert(nv);
  }
}

Solver::CRef Solver::alloc_clause(std::vector<Lit> lits, bool learnt) {
  CRef cr;
  if (!free_slots_.empty()) {
    cr = free_slots_.back();
    free_slots_.pop_back();
    clauses_[cr] = ClauseData{};
  } else {
    cr = static_cast<CRef>(clauses_.size());
    clauses_.emplace_back();
  }
  clauses_[cr].lits = std::move(lits);
  clauses_[cr].learnt = learnt;
  return cr;
}

void Solver::attach(CRef cr) {
  const auto& c = clauses_[cr].lits;
  watches_[static_cast<std::size_t>((~c[0]).code())].push_back({cr, c[1]});
  watches_[static_cast<std::size_t>((~c[1]).code())].push_back({cr, c[0]});
}

bool Solver::add_clause(std::span<const Lit> lits) {
  if (!ok_) return false;
  if (decision_level() != 0) throw std::logic_error("add_clause above level 0");
  std::vector<Lit> c(lits.begin(), lits.end());
  for (Lit l : c) {
    if (!l.valid()) throw std::invalid_argument("invalid literal");
    ensure_var(l.var());
  }
  std::sort(c.begin(), c.end());
  std::size_t j = 0;
  Lit prev;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Lit l = c[i];
    if (value(l) == kTrue || (prev.valid() && l == ~prev)) return true;
    if (value(l) != kFalse && l != prev) {
      c[j++] = l;
      prev = l;
    }
  }
  c.resize(j);
  model_valid_ = false;
  if (c.empty()) {
    ok_ = false;
    return false;
  }
  if (c.size() == 1) {
    enqueue(c[0], kNoReason);
    ok_ = (propagate() == kNoReason);
    return ok_;
  }
  const CRef cr = alloc_clause(std::move(c), false);
  attach(cr);
  ++num_original_;
  return true;
}

void Solver::enqueue(Lit l, CRef reason) {
  const auto v = static_cast<std::size_t>(l.var());
  assigns_[v] = l.negative() ? kFalse : kTrue;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
  CRef confl = kNoReason;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = ~p;
    auto& ws = watches_[static_cast<std::size_t>(p.code())];
    ++stats_.propagations;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      const Watcher w = ws[i];
      if (value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      auto& c = clauses_[w.cref].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      ++i;
      const Lit first = c[0];
      const Watcher nw{w.cref, first};
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = nw;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[static_cast<std::size_t>((~c[1]).code())].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = nw;
      if (value(first) == kFalse) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != kNoReason) break;
  }
  return confl;
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt,
                     int& out_btlevel, std::uint32_t& out_lbd) {
  int path_count = 0;
  Lit p;
  out_learnt.clear();
  out_learnt.emplace_back();
  std::size_t index = trail_.size();
  do {
    auto& cd = clauses_[confl];
    if (cd.learnt) clause_bump(cd);
    for (std::size_t k = p.valid() ? 1 : 0; k < cd.lits.size(); ++k) {
      const Lit q = cd.lits[k];
      const auto v = static_cast<std::size_t>(q.var());
      if (!seen_[v] && level(q.var()) > 0) {
        var_bump(q.var());
        seen_[v] = 1;
        if (level(q.var()) >= decision_level()) {
          ++path_count;
        } else {
          out_learnt.push_back(q);
        }
      }
    }
    while (!seen_[static_cast<std::size_t>(trail_[--index].var())]) {
    }
    p = trail_[index];
    confl = reason_[static_cast<std::size_t>(p.var())];
    seen_[static_cast<std::size_t>(p.var())] = 0;
    --path_count;
  } while (path_count > 0);
  out_learnt[0] = ~p;

  // Recursive minimization.
  analyze_toclear_ = out_learnt;
  std::uint32_t levels = 0;
  for (std::size_t k = 1; k < out_learnt.size(); ++k) {
    levels |= abstract_level(level(out_learnt[k].var()));
  }
  std::size_t j = 1;
  for (std::size_t k = 1; k < out_learnt.size(); ++k) {
    const Lit q = out_learnt[k];
    if (reason_[static_cast<std::size_t>(q.var())] == kNoReason ||
        !lit_redundant(q, levels)) {
      out_learnt[j++] = q;
    }
  }
  out_learnt.resize(j);
  stats_.learnt_literals += out_learnt.size();

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < out_learnt.size(); ++k) {
      if (level(out_learnt[k].var()) > level(out_learnt[max_i].var())) max_i = k;
    }
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level(out_learnt[1].var());
  }
  for (Lit l : analyze_toclear_) seen_[static_cast<std::size_t>(l.var())] = 0;

  // Literal block distance: distinct decision levels in the clause.
  std::vector<int> levels_seen;
  levels_seen.reserve(out_learnt.size());
  for (Lit l : out_learnt) levels_seen.push_back(level(l.var()));
  std::sort(levels_seen.begin(), levels_seen.end());
  out_lbd = static_cast<std::uint32_t>(
      std::unique(levels_seen.begin(), levels_seen.end()) - levels_seen.begin());
}

bool Solver::lit_redundant(Lit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  const std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    const Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const auto& c = clauses_[reason_[static_cast<std::size_t>(q.var())]].lits;
    for (std::size_t k = 1; k < c.size(); ++k) {
      const Lit l = c[k];
      const auto v = static_cast<std::size_t>(l.var());
      if (seen_[v] || level(l.var()) == 0) continue;
      if (reason_[v] != kNoReason &&
          (abstract_level(level(l.var())) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(l);
        analyze_toclear_.push_back(l);
      } else {
        for (std::size_t m = top; m < analyze_toclear_.size(); ++m) {
          seen_[static_cast<std::size_t>(analyze_toclear_[m].var())] = 0;
        }
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Solver::analyze_final(Lit p) {
  conflict_.clear();
  conflict_.push_back(p);
  if (decision_level() == 0) return;
  seen_[static_cast<std::size_t>(p.var())] = 1;
  for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[0]);) {
    const auto v = static_cast<std::size_t>(trail_[i].var());
    if (!seen_[v]) continue;
    if (reason_[v] == kNoReason) {
      conflict_.push_back(~trail_[i]);
    } else {
      const auto& c = clauses_[reason_[v]].lits;
      for (std::size_t k = 1; k < c.size(); ++k) {
        if (level(c[k].var()) > 0) seen_[static_cast<std::size_t>(c[k].var())] = 1;
      }
    }
    seen_[v] = 0;
  }
  seen_[static_cast<std::size_t>(p.var())] = 0;
}

void Solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  const auto stop = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(lvl)]);
  for (std::size_t c = trail_.size(); c-- > stop;) {
    const Var v = trail_[c].var();
    const auto vi = static_cast<std::size_t>(v);
    assigns_[vi] = kUndef;
    reason_[vi] = kNoReason;
    polarity_[vi] = trail_[c].negative();
    if (!heap_contains(v)) heap_insert(v);
  }
  qhead_ = stop;
  trail_.resize(stop);
  trail_lim_.resize(static_cast<std::size_t>(lvl));
}

Lit Solver::pick_branch() {
  Var next = 0;
  if (options_.random_var_freq > 0 && !heap_.empty() &&
      next_random() < options_.random_var_freq) {
    next = heap_[static_cast<std::size_t>(next_random() * static_cast<double>(heap_.size()))];
    if (assigns_[static_cast<std::size_t>(next)] != kUndef) next = 0;
  }
  while (next == 0 || assigns_[static_cast<std::size_t>(next)] != kUndef) {
    if (heap_.empty()) return Lit();
    next = heap_pop();
  }
  return polarity_[static_cast<std::size_t>(next)] ? Lit::neg(next) : Lit::pos(next);
}

bool Solver::locked(CRef cr) const {
  const auto& c = clauses_[cr].lits;
  return value(c[0]) == kTrue &&
         reason_[static_cast<std::size_t>(c[0].var())] == cr;
}

void Solver::rebuild_watches() {
  for (auto& ws : watches_) {
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watcher& w) { return clauses_[w.cref].deleted; }),
             ws.end());
  }
}

void Solver::reduce_db() {
  std::vector<CRef> candidates;
  std::vector<CRef> kept;
  for (CRef cr : learnts_) {
    const auto& c = clauses_[cr];
    if (c.lbd <= 2 || c.lits.size() <= 2 || locked(cr)) {
      kept.push_back(cr);
    } else {
      candidates.push_back(cr);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](CRef a, CRef b) {
    return clauses_[a].activity < clauses_[b].activity;
  });
  const std::size_t drop = candidates.size() / 2;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i < drop) {
      auto& c = clauses_[candidates[i]];
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      free_slots_.push_back(candidates[i]);
    } else {
      kept.push_back(candidates[i]);
    }
  }
  learnts_ = std::move(kept);
  rebuild_watches();
}

bool Solver::simplify_at_root() {
  if (propagate() != kNoReason) {
    ok_ = false;
    return false;
  }
  if (trail_.size() == simp_trail_size_) return true;
  for (Lit l : trail_) reason_[static_cast<std::size_t>(l.var())] = kNoReason;
  bool removed_learnt = false;
  for (CRef cr = 0; cr < clauses_.size(); ++cr) {
    auto& c = clauses_[cr];
    if (c.deleted) continue;
    const bool sat = std::any_of(c.lits.begin(), c.lits.end(),
                                 [&](Lit l) { return value(l) == kTrue; });
    if (!sat) continue;
    if (c.learnt) {
      removed_learnt = true;
    } else {
      --num_original_;
    }
    c.deleted = true;
    c.lits.clear();
    c.lits.shrink_to_fit();
    free_slots_.push_back(cr);
  }
  if (removed_learnt) {
    std::erase_if(learnts_, [&](CRef cr) { return clauses_[cr].deleted; });
  }
  rebuild_watches();
  simp_trail_size_ = trail_.size();
  return true;
}

bool Solver::out_of_budget() const {
  if (budget_ && stats_.conflicts - budget_base_ >= *budget_) return true;
  return deadline_ && Clock::now() >= *deadline_;
}

void Solver::var_bump(Var v) {
  auto& a = activity_[static_cast<std::size_t>(v)];
  if ((a += var_inc_) > 1e100) {
    for (auto& x : activity_) x *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v)) heap_up(static_cast<std::size_t>(heap_index_[static_cast<std::size_t>(v)]));
}

void Solver::clause_bump(ClauseData& c) {
  if ((c.activity += static_cast<float>(cla_inc_)) > 1e20f) {
    for (CRef cr : learnts_) clauses_[cr].activity *= 1e-20f;
    cla_inc_ *= 1e-20;
  }
}

void Solver::heap_insert(Var v) {
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  const Var v = heap_[i];
  const double act = activity_[static_cast<std::size_t>(v)];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (activity_[static_cast<std::size_t>(heap_[parent])] >= act) break;
    heap_[i] = heap_[parent];
    heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
  const Var v = heap_[i];
  const double act = activity_[static_cast<std::size_t>(v)];
  const std::size_t n = heap_.size();
  while (2 * i + 1 < n) {
    std::size_t child = 2 * i + 1;
    if (child + 1 < n && activity_[static_cast<std::size_t>(heap_[child + 1])] >
                             activity_[static_cast<std::size_t>(heap_[child])]) {
      ++child;
    }
    if (activity_[static_cast<std::size_t>(heap_[child])] <= act) break;
    heap_[i] = heap_[child];
    heap_index_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(i);
}

Var Solver::heap_pop() {
  const Var top = heap_.front();
  heap_index_[static_cast<std::size_t>(top)] = -1;
  const Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[static_cast<std::size_t>(last)] = 0;
    heap_down(0);
  }
  return top;
}

std::optional<Result> Solver::search(std::int64_t conflict_limit) {
  std::int64_t conflicts_here = 0;
  std::vector<Lit> learnt;
  for (;;) {
    const CRef confl = propagate();
    if (confl != kNoReason) {
      ++stats_.conflicts;
      ++conflicts_here;
      if (decision_level() == 0) {
        ok_ = false;
        return Result::kUnsat;
      }
      int bt = 0;
      std::uint32_t lbd = 0;
      analyze(confl, learnt, bt, lbd);
      cancel_until(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        const CRef cr = alloc_clause(learnt, true);
        clauses_[cr].lbd = lbd;
        learnts_.push_back(cr);
        attach(cr);
        clause_bump(clauses_[cr]);
        enqueue(learnt[0], cr);
      }
      var_decay();
      clause_decay();
      if (out_of_budget()) {
        cancel_until(0);
        return Result::kInterrupted;
      }
      continue;
    }
    if (conflicts_here >= conflict_limit) {
      cancel_until(0);
      return std::nullopt;
    }
    if (decision_level() == 0 && !simplify_at_root()) return Result::kUnsat;
    if (static_cast<double>(learnts_.size()) >= max_learnts_) reduce_db();

    Lit next;
    while (static_cast<std::size_t>(decision_level()) < assumptions_.size()) {
      const Lit p = assumptions_[static_cast<std::size_t>(decision_level())];
      if (value(p) == kTrue) {
        trail_lim_.push_back(static_cast<int>(trail_.size()));
      } else if (value(p) == kFalse) {
        analyze_final(~p);
        return Result::kUnsat;
      } else {
        next = p;
        break;
      }
    }
    if (!next.valid()) {
      ++stats_.decisions;
      next = pick_branch();
      if (!next.valid()) return Result::kSat;
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(next, kNoReason);
  }
}

Result Solver::solve(std::span<const Lit> assumptions) {
  ++stats_.solves;
  model_valid_ = false;
  conflict_.clear();
  if (!ok_) return Result::kUnsat;
  assumptions_.assign(assumptions.begin(), assumptions.end());
  for (Lit l : assumptions_) ensure_var(l.var());
  budget_base_ = stats_.conflicts;
  max_learnts_ = std::max(static_cast<double>(num_original_) / 3.0, 5000.0) +
                 static_cast<double>(learnts_.size());
  std::optional<Result> status;
  for (int round = 0; !status; ++round) {
    const auto limit = static_cast<std::int64_t>(
        luby(2.0, round) * static_cast<double>(options_.restart_base));
    status = search(limit);
    if (!status) {
      ++stats_.restarts;
      max_learnts_ *= 1.02;
      if (out_of_budget()) status = Result::kInterrupted;
    }
  }
  if (*status == Result::kSat) {
    model_.assign(assigns_.size(), false);
    for (std::size_t v = 1; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
    model_valid_ = true;
  }
  cancel_until(0);
  return *status;
}

const std::vector<bool>& Solver::model() const {
  if (!model_valid_) throw std::logic_error("no model: last solve was not SAT");
  return model_;
}

}  // namespace mpdt::sat
