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

#ifndef MPDT_TRAINER_HPP_
#define MPDT_TRAINER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "mpdt/dataset.hpp"
#include "mpdt/optimizer.hpp"
#include "mpdt/tree.hpp"

namespace mpdt {

struct TrainConfig {
  double p = 0.8;           // share of the input kept for training
  std::size_t k = 100;      // diverse solutions requested
  double delta = 0.0;       // selection accuracy tolerance
  std::uint64_t seed = 0;
  std::optional<double> timeout_seconds;
  int lb = 3;
  bool accept_suboptimal_diverse = false;
  // Return the greedy tree instead of failing when no model was found in time.
  bool greedy_fallback = false;
  std::function<void(const Progress&)> on_improve;

  void validate() const;  // throws std::invalid_argument
};

// Thrown when the time budget ran out before any model was found.
class TrainTimeout : public std::runtime_error {
 public:
  TrainTimeout(std::string what, DecisionTree greedy)
      : std::runtime_error(std::move(what)), greedy(std::move(greedy)) {}
  DecisionTree greedy;
};

struct GreedyTree {
  DecisionTree tree;
  int ub = 1;
};

// Top-down pure tree: each impure node splits on the unused feature of highest
// information gain, lowest index on ties. Throws InseparableError.
GreedyTree greedy_upper_bound(const BinDataset& ds);

struct ScoredTree {
  DecisionTree tree;
  double accuracy = 0;    // on the selection split
  std::size_t index = 0;  // position in the solution sequence
};

// Scans trees in order, keeping those within delta of the best accuracy seen
// so far; earlier keepers that fall out of range when the best improves are
// dropped.
std::vector<ScoredTree> filter_by_selection(const std::vector<DecisionTree>& trees,
                                            const BinDataset& selection, double delta);

struct PhaseTimes {
  double greedy = 0, encode = 0, solve = 0, diverse = 0, select = 0;
};

struct TrainResult {
  int lb = 3, ub = 1;
  SolveStatus status = SolveStatus::kOptimal;
  std::uint64_t cost = 0;
  std::size_t size = 1;
  bool short_circuit = false;  // single-class input, nothing encoded
  bool exhausted = false;      // every optimal tree was enumerated
  std::size_t n_vars = 0, n_hard = 0, n_soft = 0;
  std::size_t n_train = 0, n_selection = 0;
  std::vector<DecisionTree> solutions;
  std::vector<double> selection_accuracy;  // per solution
  std::vector<ScoredTree> kept;
  std::size_t chosen = 0;  // into kept
  std::vector<std::uint64_t> trace;  // improving costs, in order
  PhaseTimes times;

  const DecisionTree& model() const { return kept[chosen].tree; }
};

// The whole pipeline on an explicit train/selection pair.
TrainResult train_split(const BinDataset& train, const BinDataset& selection,
                        const TrainConfig& cfg);

// Splits eps by cfg.p (stratified) and trains.
TrainResult train(const BinDataset& eps, const TrainConfig& cfg);

struct ResplitResult {
  std::vector<double> test_accuracy;  // per resplit
  std::vector<std::size_t> chosen;    // solution index picked per resplit
  double mean = 0;
};

// The training split stays fixed; pool (selection plus test rows) is
// re-divided n times with stratification, holding out test_rows rows for
// testing each time. Every resplit picks a solution on its selection part the
// way train does and scores it on its test part. Resplits run on up to jobs
// threads; results do not depend on jobs.
ResplitResult resplit_evaluate(const std::vector<DecisionTree>& solutions,
                               const BinDataset& pool, std::size_t test_rows,
                               std::size_t n, std::uint64_t seed, double delta,
                               unsigned jobs = 1);

// Deterministic summary: no wall times, so equal runs serialize identically.
nlohmann::json report_json(const TrainResult& r);

}  // namespace mpdt

#endif  // MPDT_TRAINER_HPP_
