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

#ifndef MPDT_OPTIMIZER_HPP_
#define MPDT_OPTIMIZER_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mpdt/cnf.hpp"
#include "mpdt/sat.hpp"

namespace mpdt {

enum class SolveStatus {
  kOptimal,
  kFeasible,  // interrupted with a model
  kUnsat,     // hard clauses unsatisfiable
  kTimeout,   // interrupted before any model
};
const char* to_string(SolveStatus s);

struct Progress {
  double seconds = 0;  // since the start of the run
  std::uint64_t cost = 0;
};

struct MaxSatOptions {
  sat::Deadline deadline;
  // Called once per improved upper bound.
  std::function<void(const Progress&)> on_improve;
  std::uint64_t seed = 0;
  // Keep a diverse solution whose inner search was interrupted before
  // optimality was proven.
  bool accept_suboptimal_diverse = false;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::kUnsat;
  std::uint64_t cost = 0;
  std::vector<bool> model;  // empty when no model was found
  std::vector<Progress> trace;
  // Holds the hard clauses plus the bound of the last satisfiable query.
  std::unique_ptr<sat::Solver> solver;
  VarPool pool;

  bool has_model() const { return !model.empty(); }
};

// Linear search from above: every model tightens the bound to its cost minus
// one. The tightening is passed as an assumption and only made permanent for
// the bound already achieved, so the solver always holds the last satisfiable
// instance.
SolveOutcome linear_maxsat(const WcnfFormula& f, const MaxSatOptions& opts = {});

struct DiverseSolutions {
  std::vector<std::vector<bool>> models;
  std::vector<std::uint64_t> diversity_costs;
  bool exhausted = false;  // no further assignment of vars exists
};

// Repeatedly solves, over the clauses held by base.solver, the MaxSAT problem
// whose hard part blocks every projection onto vars found so far and whose
// soft part prefers the polarities used least by earlier solutions.
DiverseSolutions mdsol(SolveOutcome& base, std::size_t k, std::span<const Var> vars,
                       const MaxSatOptions& opts = {});

}  // namespace mpdt

#endif  // MPDT_OPTIMIZER_HPP_
