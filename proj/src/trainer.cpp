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

#include "mpdt/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <string>
#include <thread>

#include "mpdt/encoder.hpp"
#include "mpdt/random.hpp"

namespace mpdt {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Sum over the classes of n_c * log2(n / n_c): n times the entropy.
double scaled_entropy(const std::vector<std::size_t>& counts) {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  double h = 0;
  for (auto c : counts) {
    if (c != 0) h += static_cast<double>(c) * std::log2(static_cast<double>(n) / static_cast<double>(c));
  }
  return h;
}

bool pure(const BinDataset& ds, const std::vector<std::size_t>& rows) {
  for (auto q : rows) {
    if (ds.labels[q] != ds.labels[rows.front()]) return false;
  }
  return true;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(p > 0 && p < 1)) throw std::invalid_argument("p must lie in (0, 1)");
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(delta >= 0)) throw std::invalid_argument("delta must be non-negative");
  if (timeout_seconds && !(*timeout_seconds > 0)) {
    throw std::invalid_argument("timeout must be positive");
  }
  if (lb < 3 || lb % 2 == 0) throw std::invalid_argument("lb must be odd and at least 3");
}

GreedyTree greedy_upper_bound(const BinDataset& ds) {
  if (auto groups = check_separability(ds); !groups.empty()) {
    throw InseparableError("dataset has rows with equal features and different labels",
                           std::move(groups));
  }
  DecisionTree tree;
  tree.n_features = ds.k;
  if (ds.n_rows() == 0) {
    tree = DecisionTree::single_leaf(0, ds.k);
    return {tree, 1};
  }

  struct Pending {
    int node;
    std::vector<std::size_t> rows;
    std::vector<bool> used;
  };
  std::vector<std::size_t> all(ds.n_rows());
  for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
  tree.nodes.emplace_back();
  std::deque<Pending> queue;
  queue.push_back({0, std::move(all), std::vector<bool>(ds.k, false)});

  while (!queue.empty()) {
    Pending cur = std::move(queue.front());
    queue.pop_front();
    auto& node = tree.nodes[static_cast<std::size_t>(cur.node)];
    if (pure(ds, cur.rows)) {
      node.leaf = true;
      node.label = ds.labels[cur.rows.front()];
      continue;
    }
    // Highest gain = lowest weighted child entropy; the parent term is shared.
    int best = -1;
    double best_h = 0;
    for (std::size_t r = 0; r < ds.k; ++r) {
      if (cur.used[r]) continue;
      std::vector<std::size_t> ones(ds.n_classes, 0), zeros(ds.n_classes, 0);
      std::size_t n1 = 0;
      for (auto q : cur.rows) {
        auto lab = static_cast<std::size_t>(ds.labels[q]);
        if (ds.value(q, r)) {
          ++ones[lab];
          ++n1;
        } else {
          ++zeros[lab];
        }
      }
      if (n1 == 0 || n1 == cur.rows.size()) continue;
      const double h = scaled_entropy(ones) + scaled_entropy(zeros);
      if (best < 0 || h < best_h - 1e-9) {
        best = static_cast<int>(r);
        best_h = h;
      }
    }
    // Separable data always has a splitting feature left: rows agreeing on
    // every unused feature also agree on the used ones.
    if (best < 0) throw std::logic_error("greedy builder found no split");

    std::vector<std::size_t> ones, zeros;
    for (auto q : cur.rows) (ds.value(q, static_cast<std::size_t>(best)) ? ones : zeros).push_back(q);
    auto used = cur.used;
    used[static_cast<std::size_t>(best)] = true;
    const int on0 = static_cast<int>(tree.nodes.size());
    const int on1 = on0 + 1;
    tree.nodes.resize(tree.nodes.size() + 2);
    auto& split = tree.nodes[static_cast<std::size_t>(cur.node)];
    split.leaf = false;
    split.feature = best;
    split.on0 = on0;
    split.on1 = on1;
    queue.push_back({on0, std::move(zeros), used});
    queue.push_back({on1, std::move(ones), std::move(used)});
  }
  return {tree, static_cast<int>(tree.size())};
}

std::vector<ScoredTree> filter_by_selection(const std::vector<DecisionTree>& trees,
                                            const BinDataset& selection, double delta) {
  std::vector<ScoredTree> kept;
  double best = -1;
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const double acc = evaluate(trees[i], selection);
    if (acc > best) {
      best = acc;
      std::erase_if(kept, [&](const ScoredTree& t) { return t.accuracy < best - delta; });
    }
    if (acc >= best - delta) kept.push_back({trees[i], acc, i});
  }
  return kept;
}

TrainResult train_split(const BinDataset& train, const BinDataset& selection,
                        const TrainConfig& cfg) {
  cfg.validate();
  const auto start = Clock::now();
  sat::Deadline deadline;
  if (cfg.timeout_seconds) {
    deadline = start + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(*cfg.timeout_seconds));
  }

  TrainResult res;
  res.lb = cfg.lb;
  res.n_train = train.n_rows();
  res.n_selection = selection.n_rows();

  auto t = Clock::now();
  GreedyTree greedy = greedy_upper_bound(train);
  res.times.greedy = since(t);
  res.ub = greedy.ub;

  if (greedy.tree.size() == 1) {
    // One class (or no rows): a bare leaf is optimal and the encoding cannot
    // express it.
    res.short_circuit = true;
    res.status = SolveStatus::kOptimal;
    res.cost = 1;
    res.size = 1;
    res.exhausted = true;
    res.solutions.push_back(greedy.tree);
  } else {
    t = Clock::now();
    const int lb = std::min(cfg.lb, greedy.ub);
    res.lb = lb;
    MpdtInstance inst = build(train, greedy.ub, lb);
    res.n_vars = static_cast<std::size_t>(inst.formula.n_vars);
    res.n_hard = inst.formula.hard.size();
    res.n_soft = inst.formula.soft.size();
    res.times.encode = since(t);

    t = Clock::now();
    MaxSatOptions opts;
    opts.deadline = deadline;
    opts.seed = derive_seed(cfg.seed, "solver");
    opts.accept_suboptimal_diverse = cfg.accept_suboptimal_diverse;
    opts.on_improve = [&](const Progress& p) {
      res.trace.push_back(p.cost);
      if (cfg.on_improve) cfg.on_improve(p);
    };
    SolveOutcome base = linear_maxsat(inst.formula, opts);
    res.times.solve = since(t);
    res.status = base.status;
    if (base.status == SolveStatus::kUnsat) {
      // The greedy tree satisfies the hard clauses, so this is a bug.
      throw std::logic_error("encoding of a separable dataset is unsatisfiable");
    }
    if (!base.has_model()) {
      if (cfg.greedy_fallback) {
        res.status = SolveStatus::kTimeout;
        res.cost = static_cast<std::uint64_t>((greedy.ub + 1) / 2);
        res.size = greedy.tree.size();
        res.solutions.push_back(greedy.tree);
      } else {
        throw TrainTimeout("no tree found within the time budget", greedy.tree);
      }
    } else {
      res.cost = base.cost;
      res.solutions.push_back(decode(inst, base.model));
      res.size = res.solutions.front().size();
      if (base.status == SolveStatus::kOptimal && cfg.k > 1) {
        t = Clock::now();
        opts.on_improve = nullptr;
        auto targets = inst.layout.feature_vars();
        std::erase(targets, Var{0});
        auto diverse = mdsol(base, cfg.k, targets, opts);
        res.exhausted = diverse.exhausted;
        if (!diverse.models.empty()) {
          res.solutions.clear();
          for (const auto& m : diverse.models) res.solutions.push_back(decode(inst, m));
        }
        res.times.diverse = since(t);
      }
    }
  }

  t = Clock::now();
  for (const auto& tree : res.solutions) res.selection_accuracy.push_back(evaluate(tree, selection));
  res.kept = filter_by_selection(res.solutions, selection, cfg.delta);
  Rng pick(derive_seed(cfg.seed, "tiebreak"));
  res.chosen = static_cast<std::size_t>(pick.below(res.kept.size()));
  res.times.select = since(t);
  return res;
}

TrainResult train(const BinDataset& eps, const TrainConfig& cfg) {
  cfg.validate();
  auto split = stratified_holdout(eps, 1.0 - cfg.p, derive_seed(cfg.seed, "split/selection"), 3);
  return train_split(split.keep, split.holdout, cfg);
}

ResplitResult resplit_evaluate(const std::vector<DecisionTree>& solutions,
                               const BinDataset& pool, std::size_t test_rows,
                               std::size_t n, std::uint64_t seed, double delta,
                               unsigned jobs) {
  if (solutions.empty()) throw std::invalid_argument("no solutions to evaluate");
  if (test_rows == 0 || test_rows >= pool.n_rows()) {
    throw std::invalid_argument("test rows must leave both parts non-empty");
  }
  ResplitResult out;
  out.test_accuracy.assign(n, 0.0);
  out.chosen.assign(n, 0);
  const double frac = static_cast<double>(test_rows) / static_cast<double>(pool.n_rows());
  auto one = [&](std::size_t r) {
    const std::string tag = "resplit/" + std::to_string(r);
    auto split = stratified_holdout(pool, frac, derive_seed(seed, tag), 3);
    auto kept = filter_by_selection(solutions, split.keep, delta);
    Rng pick(derive_seed(seed, tag + "/tiebreak"));
    const auto& winner = kept[static_cast<std::size_t>(pick.below(kept.size()))];
    out.chosen[r] = winner.index;
    out.test_accuracy[r] = evaluate(winner.tree, split.holdout);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t r = 0; r < n; ++r) one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < n;) one(r);
      });
    }
  }
  double sum = 0;
  for (double a : out.test_accuracy) sum += a;
  out.mean = n == 0 ? 0.0 : sum / static_cast<double>(n);
  return out;
}

nlohmann::json report_json(const TrainResult& r) {
  nlohmann::json j;
  j["bounds"] = {{"lb", r.lb}, {"ub", r.ub}};
  j["status"] = to_string(r.status);
  j["cost"] = r.cost;
  j["size"] = r.size;
  j["short_circuit"] = r.short_circuit;
  j["exhausted"] = r.exhausted;
  j["n_solutions"] = r.solutions.size();
  j["encoding"] = {{"vars", r.n_vars}, {"hard", r.n_hard}, {"soft", r.n_soft}};
  j["rows"] = {{"train", r.n_train}, {"selection", r.n_selection}};
  j["selection_accuracy"] = r.selection_accuracy;
  auto kept = nlohmann::json::array();
  for (const auto& t : r.kept) kept.push_back(t.index);
  j["kept"] = kept;
  j["chosen"] = r.kept.empty() ? nlohmann::json() : nlohmann::json(r.kept[r.chosen].index);
  j["improving_costs"] = r.trace;
  return j;
}

}  // namespace mpdt
