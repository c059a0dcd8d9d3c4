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

// Acceptance checks, one per criterion. With no argument every criterion
// runs; "acceptance N" runs criterion N alone. Each prints one line starting
// with PASS, FAIL or SKIP. Exit status: 1 if anything failed, else 77 if
// something was skipped (missing data), else 0.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mpdt/cli.hpp"
#include "mpdt/dataset.hpp"
#include "mpdt/encoder.hpp"
#include "mpdt/optimizer.hpp"
#include "mpdt/oracle.hpp"
#include "mpdt/sat.hpp"
#include "mpdt/trainer.hpp"
#include "testing.hpp"

namespace fs = std::filesystem;
using namespace mpdt;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string detail;

  void fail(const std::string& why) {
    verdict = Verdict::kFail;
    note(why);
  }
  void skip(const std::string& why) {
    if (verdict == Verdict::kPass) verdict = Verdict::kSkip;
    note(why);
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

fs::path data_dir() {
  if (const char* env = std::getenv("MPDT_DATA_DIR")) return env;
  return MPDT_DATA_DIR;
}

struct Benchmark {
  std::string name;
  std::string label;
  std::size_t size;     // published optimum
  std::size_t n_sols;   // published solution count, 0 if not checked
  bool perfect;         // published test accuracy is 100%
};

const std::vector<Benchmark> kBenchmarks = {
    {"mux6", "class", 15, 2, true},
    {"corral", "class", 13, 0, false},
    {"irish", "Leaving_Certificate", 9, 6, true},
};

const Benchmark& bench(const std::string& name) {
  for (const auto& b : kBenchmarks) {
    if (b.name == name) return b;
  }
  throw std::logic_error(name);
}

std::optional<BinDataset> load(const Benchmark& b) {
  const auto path = data_dir() / (b.name + ".csv");
  if (!fs::exists(path)) return std::nullopt;
  std::string label = b.label;
  if (b.name == "irish") {
    if (const char* env = std::getenv("MPDT_IRISH_LABEL")) label = env;
  }
  auto ds = binarize(discretize(load_csv(path, label)));
  if (!check_separability(ds).empty()) ds = resolve_conflicts_majority(ds);
  return ds;
}

struct Trained {
  ThreeWaySplit parts;
  TrainResult result;
  double seconds = 0;
};

// Default pipeline: 64/16/20 split with seed 0, 100 requested solutions and a
// 15 minute budget.
std::optional<Trained> train_benchmark(const Benchmark& b) {
  auto ds = load(b);
  if (!ds) return std::nullopt;
  Trained t;
  t.parts = stratified_split(*ds, SplitSpec{});
  TrainConfig cfg;
  cfg.timeout_seconds = 900;
  const auto start = std::chrono::steady_clock::now();
  t.result = train_split(t.parts.train, t.parts.selection, cfg);
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

Outcome criterion1() {
  Outcome o;
  for (const auto& b : kBenchmarks) {
    const auto t = train_benchmark(b);
    if (!t) {
      o.skip(b.name + " data not found in " + data_dir().string());
      continue;
    }
    const auto& r = t->result;
    const std::string got = b.name + " size " + std::to_string(r.size) + " cost " +
                            std::to_string(r.cost) + " " + to_string(r.status) + " in " +
                            fmt(t->seconds) + "s";
    if (r.status != SolveStatus::kOptimal || r.size != b.size || r.cost != (b.size + 1) / 2 ||
        t->seconds > 900) {
      o.fail(got + " (expected size " + std::to_string(b.size) + ")");
    } else {
      o.note(got);
    }
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (const auto& b : kBenchmarks) {
    if (!b.perfect) continue;
    const auto t = train_benchmark(b);
    if (!t) {
      o.skip(b.name + " data not found");
      continue;
    }
    const auto pool = t->parts.selection.concat(t->parts.test);
    const auto r = resplit_evaluate(t->result.solutions, pool, t->parts.test.n_rows(), 50, 0,
                                    0.0, 4);
    std::size_t perfect = 0;
    for (double a : r.test_accuracy) perfect += a == 1.0;
    const std::string got = b.name + " mean test accuracy " + fmt(100 * r.mean) + "% (" +
                            std::to_string(perfect) + "/50 resplits at 100%)";
    if (r.mean != 1.0) {
      o.fail(got);
    } else {
      o.note(got);
    }
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (const auto& b : kBenchmarks) {
    if (b.n_sols == 0) continue;
    const auto t = train_benchmark(b);
    if (!t) {
      o.skip(b.name + " data not found");
      continue;
    }
    const auto& r = t->result;
    const std::string got = b.name + " " + std::to_string(r.solutions.size()) + " solutions" +
                            (r.exhausted ? ", exhausted" : ", not exhausted");
    if (!r.exhausted || r.solutions.size() != b.n_sols) {
      o.fail(got + " (expected " + std::to_string(b.n_sols) + ")");
    } else {
      o.note(got);
    }
  }
  return o;
}

// Random separable data with at least two labels present.
BinDataset random_instance(std::mt19937_64& rng, int trial) {
  for (;;) {
    auto ds = trial % 2 == 0 ? testing::random_separable(rng, 6, 24, 4)
                             : testing::tree_labeled(rng, 6, 24, 4, 3);
    std::set<int> labels(ds.labels.begin(), ds.labels.end());
    if (labels.size() >= 2 && check_separability(ds).empty()) return ds;
  }
}

// Large enough that no instance of the generators above exceeds it.
const oracle::Budget kOracleBudget{6, 24, 47, 20};

std::size_t g_decoded = 0, g_impure = 0;

void check_pure(const DecisionTree& t, const BinDataset& train) {
  ++g_decoded;
  if (evaluate(t, train) != 1.0) ++g_impure;
}

Outcome criterion4() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240);
  int agree = 0;
  const int n = 250;
  for (int trial = 0; trial < n; ++trial) {
    const auto ds = random_instance(rng, trial);
    const auto expected = oracle::brute_force_mpdt(ds, kOracleBudget).size;
    const auto g = greedy_upper_bound(ds);
    const auto inst = build(ds, g.ub);
    const auto r = linear_maxsat(inst.formula);
    std::size_t got = 0;
    if (r.status == SolveStatus::kOptimal) {
      const auto tree = decode(inst, r.model);
      check_pure(tree, ds);
      got = tree.size();
    }
    if (got == expected) {
      ++agree;
    } else if (o.verdict != Verdict::kFail) {
      o.fail("trial " + std::to_string(trial) + ": encoder " + std::to_string(got) +
             ", brute force " + std::to_string(expected));
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.note(std::to_string(agree) + "/" + std::to_string(n) + " datasets agree in " + fmt(secs) + "s");
  if (secs >= 600) o.fail("over 10 minutes");
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(555);
  int agree = 0, unsat = 0;
  const int n = 1000;
  for (int trial = 0; trial < n; ++trial) {
    const auto f = testing::random_wcnf(rng, 18, 40, trial % 2 == 0 ? 1 : 20);
    const auto expected = oracle::brute_force_maxsat(f);
    const auto r = linear_maxsat(f);
    const bool ok = expected ? r.status == SolveStatus::kOptimal && r.cost == *expected &&
                                   f.hard_satisfied(r.model) && f.cost(r.model) == r.cost
                             : r.status == SolveStatus::kUnsat;
    unsat += !expected;
    if (ok) {
      ++agree;
    } else if (o.verdict != Verdict::kFail) {
      o.fail("trial " + std::to_string(trial) + " disagrees");
    }
  }
  o.note(std::to_string(agree) + "/" + std::to_string(n) + " instances agree (" +
         std::to_string(unsat) + " with unsatisfiable hard clauses)");
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(66);
  // Every diverse optimal solution of random datasets.
  for (int trial = 0; trial < 150; ++trial) {
    const auto ds = random_instance(rng, trial);
    TrainConfig cfg;
    cfg.k = 30;
    for (const auto& t : train_split(ds, ds, cfg).solutions) check_pure(t, ds);
  }
  // Arbitrary, non-optimal models of the hard clauses.
  for (int trial = 0; trial < 60; ++trial) {
    const auto ds = random_instance(rng, trial);
    const auto inst = build(ds, greedy_upper_bound(ds).ub + 4);
    sat::Solver s;
    s.ensure_var(inst.formula.n_vars);
    for (const auto& c : inst.formula.hard) s.add_clause(c);
    const auto vars = inst.layout.feature_vars();
    for (int round = 0; round < 10 && s.solve() == sat::Result::kSat; ++round) {
      check_pure(decode(inst, s.model()), ds);
      Clause block;
      for (Var v : vars) block.push_back(s.model_value(v) ? Lit::neg(v) : Lit::pos(v));
      s.add_clause(block);
    }
  }
  // The benchmarks' solutions.
  for (const auto& b : kBenchmarks) {
    if (const auto t = train_benchmark(b)) {
      for (const auto& tree : t->result.solutions) check_pure(tree, t->parts.train);
    }
  }
  o.note(std::to_string(g_decoded) + " decoded trees, " + std::to_string(g_impure) +
         " impure on their training rows");
  if (g_impure != 0) o.fail("purity violated");
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7);
  for (std::size_t m : {8u, 32u, 128u}) {
    std::set<std::vector<std::uint8_t>> seen;
    std::vector<std::vector<std::uint8_t>> rows;
    std::vector<int> labels;
    while (rows.size() < m) {
      std::vector<std::uint8_t> r(8);
      for (auto& bit : r) bit = static_cast<std::uint8_t>(rng() & 1);
      if (!seen.insert(r).second) continue;
      rows.push_back(r);
      labels.push_back(static_cast<int>(rows.size() % 2));
    }
    const auto ds = BinDataset::from_rows(rows, labels, 2);
    auto count = [&](int n) {
      const auto inst = build(ds, n);
      return static_cast<double>(inst.formula.hard.size() + inst.formula.soft.size());
    };
    // Node bounds must be odd: 41 and 81 stand for n and 2n.
    const double ratio = count(81) / count(41);
    const std::string got = "m=" + std::to_string(m) + " ratio " + fmt(ratio);
    if (ratio < 3.2 || ratio > 4.8) {
      o.fail(got);
    } else {
      o.note(got);
    }
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion8() {
  Outcome o;
  const auto tmp = fs::temp_directory_path() / "mpdt_acceptance_determinism";
  fs::remove_all(tmp);
  for (const char* name : {"mux6", "corral"}) {
    const auto csv = (data_dir() / (std::string(name) + ".csv")).string();
    for (const char* run : {"a", "b"}) {
      std::ostringstream out, err;
      const auto dir = (tmp / name / run).string();
      const int code = cli::run({"train", "-i", csv, "--seed", "17", "-o", dir}, out, err);
      if (code != 0) o.fail(std::string(name) + " run failed: " + err.str());
    }
    for (const char* file : {"model.json", "report.json"}) {
      if (slurp(tmp / name / "a" / file) != slurp(tmp / name / "b" / file)) {
        o.fail(std::string(name) + " " + file + " differs");
      }
    }
    if (o.verdict == Verdict::kPass) o.note(std::string(name) + " model.json and report.json identical");
  }
  fs::remove_all(tmp);
  return o;
}

Outcome criterion9() {
  Outcome o;
  o.note("declared not reproduced: benchmark results with 10^4 or more solutions "
         "(audio, iris, monks-3, ...) and the one-hour versus ten-hour solver comparison");
  std::size_t streams = 0;
  auto check = [&](const std::vector<std::uint64_t>& costs, std::uint64_t final_cost,
                   const std::string& what) {
    ++streams;
    for (std::size_t i = 1; i < costs.size(); ++i) {
      if (costs[i] >= costs[i - 1]) o.fail(what + ": bound did not decrease");
    }
    if (costs.empty() || costs.back() != final_cost) o.fail(what + ": stream does not end at the optimum");
  };
  for (const char* name : {"mux6", "corral"}) {
    if (const auto t = train_benchmark(bench(name))) {
      check(t->result.trace, t->result.cost, name);
    }
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = testing::random_wcnf(rng, 18, 40, 10);
    std::vector<std::uint64_t> costs;
    MaxSatOptions opts;
    opts.on_improve = [&](const Progress& p) { costs.push_back(p.cost); };
    const auto r = linear_maxsat(f, opts);
    if (r.status == SolveStatus::kOptimal) check(costs, r.cost, "wcnf " + std::to_string(trial));
  }
  o.note(std::to_string(streams) + " progress streams strictly decreasing");
  return o;
}

const std::vector<std::function<Outcome()>> kCriteria = {
    criterion1, criterion2, criterion3, criterion4, criterion5,
    criterion6, criterion7, criterion8, criterion9,
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int c = 1; c <= static_cast<int>(kCriteria.size()); ++c) which.push_back(c);
  }
  bool failed = false, skipped = false;
  for (int c : which) {
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::cerr << "no criterion " << c << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = kCriteria[static_cast<std::size_t>(c - 1)]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL" : "SKIP";
    std::cout << tag << " criterion " << c << ": " << o.detail << std::endl;
    failed |= o.verdict == Verdict::kFail;
    skipped |= o.verdict == Verdict::kSkip;
  }
  return failed ? 1 : skipped ? 77 : 0;
}
