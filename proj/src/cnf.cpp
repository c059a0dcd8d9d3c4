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

#include "mpdt/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace mpdt {

Lit Lit::from_dimacs(int x) {
  if (x == 0) throw FormatError("literal 0 is not a variable");
  return x > 0 ? pos(x) : neg(-x);
}

bool satisfies(const std::vector<bool>& assignment, const Clause& clause) {
  return std::any_of(clause.begin(), clause.end(),
                     [&](Lit l) { return l.holds(assignment); });
}

std::uint64_t WcnfFormula::total_soft_weight() const {
  std::uint64_t sum = 0;
  for (const auto& s : soft) sum += s.weight;
  return sum;
}

std::uint64_t WcnfFormula::cost(const std::vector<bool>& assignment) const {
  std::uint64_t c = 0;
  for (const auto& s : soft) {
    if (!satisfies(assignment, s.lits)) c += s.weight;
  }
  return c;
}

bool WcnfFormula::hard_satisfied(const std::vector<bool>& assignment) const {
  return std::all_of(hard.begin(), hard.end(), [&](const Clause& c) {
    return satisfies(assignment, c);
  });
}

void WcnfFormula::validate() const {
  auto check = [&](const Clause& c) {
    for (Lit l : c) {
      if (!l.valid() || l.var() > n_vars) {
        throw FormatError("literal " + std::to_string(l.to_dimacs()) +
                          " out of range (n_vars=" + std::to_string(n_vars) +
                          ")");
      }
    }
  };
  for (const auto& c : hard) check(c);
  for (const auto& s : soft) {
    if (s.weight == 0) throw FormatError("soft clause with zero weight");
    check(s.lits);
  }
}

std::vector<Clause> at_most_one(std::span<const Lit> lits, VarPool& pool,
                                std::size_t pairwise_threshold) {
  std::vector<Clause> out;
  const std::size_t n = lits.size();
  if (n <= 1) return out;
  if (n <= pairwise_threshold) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) out.push_back({~lits[i], ~lits[j]});
    }
    return out;
  }
  // Sequential counter: s[i] <=> some of lits[0..i] is true.
  std::vector<Lit> s(n - 1);
  for (auto& x : s) x = Lit::pos(pool.new_var());
  out.push_back({~lits[0], s[0]});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.push_back({~lits[i], s[i]});
    out.push_back({~s[i - 1], s[i]});
    out.push_back({~lits[i], ~s[i - 1]});
  }
  out.push_back({~lits[n - 1], ~s[n - 2]});
  return out;
}

std::vector<Clause> exactly_one(std::span<const Lit> lits, VarPool& pool,
                                std::size_t pairwise_threshold) {
  if (lits.empty()) throw std::invalid_argument("exactly_one over no literals");
  std::vector<Clause> out;
  out.emplace_back(lits.begin(), lits.end());
  auto amo = at_most_one(lits, pool, pairwise_threshold);
  out.insert(out.end(), std::make_move_iterator(amo.begin()),
             std::make_move_iterator(amo.end()));
  return out;
}

IncTotalizer::IncTotalizer(std::vector<Lit> inputs, VarPool& pool)
    : inputs_(std::move(inputs)), pool_(&pool), bound_(inputs_.size()) {}

void IncTotalizer::check_bound(std::int64_t b) const {
  if (b < 0) throw std::invalid_argument("totalizer bound must be >= 0");
  if (static_cast<std::size_t>(b) >= bound_) {
    throw std::invalid_argument("totalizer bound " + std::to_string(b) +
                                " does not tighten current bound " +
                                std::to_string(bound_));
  }
}

std::vector<Lit> IncTotalizer::build(std::size_t lo, std::size_t hi,
                                     std::size_t cap, std::vector<Clause>& out) {
  if (hi - lo == 1) return {inputs_[lo]};
  const std::size_t mid = lo + (hi - lo) / 2;
  const auto left = build(lo, mid, cap, out);
  const auto right = build(mid, hi, cap, out);
  std::vector<Lit> node(std::min(hi - lo, cap));
  for (auto& x : node) x = Lit::pos(pool_->new_var());
  for (std::size_t a = 0; a <= left.size(); ++a) {
    for (std::size_t b = 0; b <= right.size(); ++b) {
      if (a + b == 0) continue;
      const std::size_t s = std::min(a + b, cap);
      Clause c;
      if (a > 0) c.push_back(~left[a - 1]);
      if (b > 0) c.push_back(~right[b - 1]);
      c.push_back(node[s - 1]);
      out.push_back(std::move(c));
    }
  }
  return node;
}

namespace {

using SumLits = std::vector<std::pair<std::uint64_t, Lit>>;  // increasing sums

// o_{k+1} -> o_k, so the true outputs of a node always form a prefix.
void chain(const SumLits& node, std::vector<Clause>& out) {
  for (std::size_t i = 1; i < node.size(); ++i) out.push_back({~node[i].second, node[i - 1].second});
}

SumLits build_weighted(std::span<const WeightedLit> in, std::uint64_t cap, SumBound kind,
                       VarPool& pool, std::vector<Clause>& out) {
  if (in.size() == 1) return {{std::min(in[0].weight, cap), in[0].lit}};
  const std::size_t mid = in.size() / 2;
  const auto left = build_weighted(in.first(mid), cap, kind, pool, out);
  const auto right = build_weighted(in.subspan(mid), cap, kind, pool, out);

  std::vector<std::uint64_t> sums;
  for (const auto& [a, la] : left) sums.push_back(a);
  for (const auto& [b, rb] : right) {
    sums.push_back(b);
    for (const auto& [a, la] : left) sums.push_back(std::min(a + b, cap));
  }
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
  SumLits node;
  for (auto x : sums) node.push_back({x, Lit::pos(pool.new_var())});
  auto output = [&](std::uint64_t sum) {
    return std::lower_bound(node.begin(), node.end(), std::min(sum, cap),
                            [](const auto& e, std::uint64_t v) { return e.first < v; });
  };

  if (kind == SumBound::kAtMost) {
    // Inputs push outputs up: left >= a and right >= b imply o_{a+b}.
    for (const auto& [a, la] : left) out.push_back({~la, output(a)->second});
    for (const auto& [b, rb] : right) out.push_back({~rb, output(b)->second});
    for (const auto& [a, la] : left) {
      for (const auto& [b, rb] : right) out.push_back({~la, ~rb, output(a + b)->second});
    }
    return node;
  }
  // Outputs need support: with left below its (i+1)-th sum and right below
  // its (j+1)-th, the total is at most left_i + right_j, which rules out the
  // smallest output above it (and, through the chain, every larger one).
  chain(node, out);
  for (std::size_t i = 0; i <= left.size(); ++i) {
    const std::uint64_t a = i == 0 ? 0 : left[i - 1].first;
    for (std::size_t j = 0; j <= right.size(); ++j) {
      const std::uint64_t b = j == 0 ? 0 : right[j - 1].first;
      const auto it = output(a + b + 1);
      if (it == node.end() || a + b >= cap) continue;
      Clause c{~it->second};
      if (i < left.size()) c.push_back(left[i].second);
      if (j < right.size()) c.push_back(right[j].second);
      out.push_back(std::move(c));
    }
  }
  return node;
}

}  // namespace

std::vector<std::pair<std::uint64_t, Lit>> weighted_totalizer(std::span<const WeightedLit> inputs,
                                                              std::uint64_t cap, VarPool& pool,
                                                              std::vector<Clause>& out,
                                                              SumBound kind) {
  std::vector<WeightedLit> in;
  for (const auto& x : inputs) {
    if (x.weight > 0) in.push_back(x);
  }
  if (in.empty() || cap == 0) return {};
  auto root = build_weighted(in, cap, kind, pool, out);
  if (kind == SumBound::kAtMost) chain(root, out);
  return root;
}

std::vector<Clause> IncTotalizer::materialize(std::size_t cap) {
  std::vector<Clause> out;
  if (outputs_.size() >= cap || outputs_.size() == inputs_.size()) return out;
  outputs_ = build(0, inputs_.size(), cap, out);
  return out;
}

std::vector<Clause> IncTotalizer::update(std::int64_t b) {
  check_bound(b);
  auto out = materialize(static_cast<std::size_t>(b) + 1);
  out.push_back({~outputs_[static_cast<std::size_t>(b)]});
  bound_ = static_cast<std::size_t>(b);
  return out;
}

IncTotalizer::Assumption IncTotalizer::assume_at_most(std::int64_t b) {
  check_bound(b);
  Assumption a;
  a.clauses = materialize(static_cast<std::size_t>(b) + 1);
  a.literal = ~outputs_[static_cast<std::size_t>(b)];
  return a;
}

namespace {

void write_clause(const Clause& c, std::ostream& out) {
  for (Lit l : c) out << l.to_dimacs() << ' ';
  out << "0\n";
}

// Reads literals up to the terminating 0 from a line stream.
Clause parse_clause(std::istringstream& ls, int n_vars, std::size_t line_no) {
  Clause c;
  long long x = 0;
  bool terminated = false;
  while (ls >> x) {
    if (x == 0) {
      terminated = true;
      break;
    }
    if (x > n_vars || -x > n_vars) {
      throw FormatError("line " + std::to_string(line_no) + ": literal " +
                        std::to_string(x) + " out of range");
    }
    c.push_back(Lit::from_dimacs(static_cast<int>(x)));
  }
  if (!terminated) {
    throw FormatError("line " + std::to_string(line_no) +
                      ": clause not terminated by 0");
  }
  return c;
}

bool skippable(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == 'c';
}

}  // namespace

void write_wcnf(const WcnfFormula& f, std::ostream& out) {
  const std::uint64_t top = f.top();
  out << "p wcnf " << f.n_vars << ' ' << f.hard.size() + f.soft.size() << ' '
      << top << '\n';
  for (const auto& c : f.hard) {
    out << top << ' ';
    write_clause(c, out);
  }
  for (const auto& s : f.soft) {
    out << s.weight << ' ';
    write_clause(s.lits, out);
  }
}

WcnfFormula read_wcnf(std::istream& in) {
  WcnfFormula f;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t top = 0;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string p, fmt;
      long long n = -1, m = -1, t = -1;
      if (!(ls >> p >> fmt >> n >> m >> t) || p != "p" || fmt != "wcnf" ||
          n < 0 || m < 0 || t < 1) {
        throw FormatError("malformed wcnf header: '" + line + "'");
      }
      f.n_vars = static_cast<int>(n);
      declared = static_cast<std::size_t>(m);
      top = static_cast<std::uint64_t>(t);
      have_header = true;
      continue;
    }
    long long w = 0;
    if (!(ls >> w) || w < 1) {
      throw FormatError("line " + std::to_string(line_no) + ": bad weight");
    }
    Clause c = parse_clause(ls, f.n_vars, line_no);
    if (static_cast<std::uint64_t>(w) >= top) {
      f.hard.push_back(std::move(c));
    } else {
      f.soft.push_back({std::move(c), static_cast<std::uint64_t>(w)});
    }
  }
  if (!have_header) throw FormatError("missing wcnf header");
  if (f.hard.size() + f.soft.size() != declared) {
    throw FormatError("clause count mismatch: header declares " +
                      std::to_string(declared));
  }
  if (f.top() > top && !f.soft.empty()) {
    throw FormatError("soft weights sum to top or more");
  }
  return f;
}

void write_wcnf(const WcnfFormula& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_wcnf(f, out);
}

WcnfFormula read_wcnf(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_wcnf(in);
}

void write_dimacs(const CnfFormula& f, std::ostream& out) {
  out << "p cnf " << f.n_vars << ' ' << f.clauses.size() << '\n';
  for (const auto& c : f.clauses) write_clause(c, out);
}

CnfFormula read_dimacs(std::istream& in) {
  CnfFormula f;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line) || line[0] == '%') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string p, fmt;
      long long n = -1, m = -1;
      if (!(ls >> p >> fmt >> n >> m) || p != "p" || fmt != "cnf" || n < 0) {
        throw FormatError("malformed cnf header: '" + line + "'");
      }
      f.n_vars = static_cast<int>(n);
      have_header = true;
      continue;
    }
    f.clauses.push_back(parse_clause(ls, f.n_vars, line_no));
  }
  if (!have_header) throw FormatError("missing cnf header");
  return f;
}

}  // namespace mpdt
