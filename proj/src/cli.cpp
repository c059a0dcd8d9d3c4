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

#include "mpdt/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpdt/cnf.hpp"
#include "mpdt/dataset.hpp"
#include "mpdt/encoder.hpp"
#include "mpdt/fileio.hpp"
#include "mpdt/optimizer.hpp"
#include "mpdt/oracle.hpp"
#include "mpdt/sat.hpp"
#include "mpdt/trainer.hpp"
#include "mpdt/tree.hpp"

#ifndef MPDT_VERSION
#define MPDT_VERSION "unknown"
#endif

namespace mpdt::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Carries an exit code out of a subcommand.
struct Failure {
  int code;
  std::string message;
};

struct DataOptions {
  std::string input;
  std::string label = "class";
  int bins = 8;
  bool resolve_conflicts = false;
};

void add_data_options(CLI::App* app, DataOptions& d) {
  app->add_option("--input,-i", d.input, "CSV file, or a dataset written by preprocess")
      ->required();
  app->add_option("--label", d.label, "label column of a CSV input");
  app->add_option("--bins", d.bins, "equal-width bins for continuous columns")
      ->check(CLI::PositiveNumber);
  app->add_flag("--resolve-conflicts", d.resolve_conflicts,
                "drop minority-label rows of conflicting groups instead of failing");
}

std::string percent(double acc) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * acc);
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kConfigError, "cannot read " + path.string()};
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw Failure{kConfigError, path.string() + ": " + e.what()};
  }
}

BinDataset load_dataset(const DataOptions& d, std::ostream& err) {
  BinDataset ds;
  try {
    if (fs::path(d.input).extension() == ".csv") {
      ds = binarize(discretize(load_csv(d.input, d.label), d.bins));
    } else {
      std::ifstream in(d.input);
      if (!in) throw Failure{kConfigError, "cannot read " + d.input};
      ds = read_binarized(in);
    }
  } catch (const DataError& e) {
    throw Failure{kConfigError, e.what()};
  }
  auto groups = check_separability(ds);
  if (groups.empty()) return ds;
  if (d.resolve_conflicts) {
    err << "dropping minority rows of " << groups.size() << " conflicting group(s)\n";
    return resolve_conflicts_majority(ds);
  }
  std::ostringstream msg;
  msg << groups.size() << " group(s) of rows share features but not labels:";
  for (const auto& g : groups) {
    msg << "\n  rows";
    for (auto q : g) msg << ' ' << ds.source_rows[q] + 1 << " (" << ds.class_names[static_cast<std::size_t>(ds.labels[q])] << ')';
  }
  msg << "\n(row numbers count data rows from 1; --resolve-conflicts keeps the majority)";
  throw Failure{kInseparable, msg.str()};
}

std::optional<double> positive_or_none(double seconds) {
  if (seconds > 0) return seconds;
  return std::nullopt;
}

sat::Deadline deadline_after(std::optional<double> seconds) {
  if (!seconds) return std::nullopt;
  return sat::Clock::now() + std::chrono::duration_cast<sat::Clock::duration>(
                                 std::chrono::duration<double>(*seconds));
}

// ---- train -------------------------------------------------------------

struct TrainOptions {
  DataOptions data;
  std::vector<double> split{0.64, 0.16, 0.20};
  std::uint64_t seed = 0;
  std::size_t k = 100;
  double delta = 0;
  double timeout = 0;  // seconds, 0 = none
  int lb = 3;
  bool accept_suboptimal_diverse = false;
  bool greedy_fallback = false;
  std::string out_dir = "mpdt-out";
  std::string from_manifest;
};

json config_json(const TrainOptions& o) {
  return {{"input", o.data.input},
          {"label", o.data.label},
          {"bins", o.data.bins},
          {"resolve_conflicts", o.data.resolve_conflicts},
          {"split", o.split},
          {"seed", o.seed},
          {"k", o.k},
          {"delta", o.delta},
          {"timeout", o.timeout},
          {"lb", o.lb},
          {"accept_suboptimal_diverse", o.accept_suboptimal_diverse},
          {"greedy_fallback", o.greedy_fallback},
          {"out", o.out_dir}};
}

void load_config(const json& c, TrainOptions& o) {
  try {
    o.data.input = c.at("input").get<std::string>();
    o.data.label = c.at("label").get<std::string>();
    o.data.bins = c.at("bins").get<int>();
    o.data.resolve_conflicts = c.at("resolve_conflicts").get<bool>();
    o.split = c.at("split").get<std::vector<double>>();
    o.seed = c.at("seed").get<std::uint64_t>();
    o.k = c.at("k").get<std::size_t>();
    o.delta = c.at("delta").get<double>();
    o.timeout = c.at("timeout").get<double>();
    o.lb = c.at("lb").get<int>();
    o.accept_suboptimal_diverse = c.at("accept_suboptimal_diverse").get<bool>();
    o.greedy_fallback = c.at("greedy_fallback").get<bool>();
    o.out_dir = c.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw Failure{kConfigError, std::string("manifest config: ") + e.what()};
  }
}

SplitSpec split_spec(const std::vector<double>& split, std::uint64_t seed) {
  if (split.size() != 3) throw Failure{kConfigError, "--split needs three fractions"};
  SplitSpec s{split[0], split[1], split[2], seed};
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw Failure{kConfigError, e.what()};
  }
  return s;
}

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  TrainConfig cfg;
  cfg.k = o.k;
  cfg.delta = o.delta;
  cfg.seed = o.seed;
  cfg.timeout_seconds = positive_or_none(o.timeout);
  cfg.lb = o.lb;
  cfg.accept_suboptimal_diverse = o.accept_suboptimal_diverse;
  cfg.greedy_fallback = o.greedy_fallback;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw Failure{kConfigError, e.what()};
  }
  const SplitSpec spec = split_spec(o.split, o.seed);
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw Failure{kConfigError, "cannot create " + o.out_dir + ": " + ec.message()};

  auto t = std::chrono::steady_clock::now();
  const BinDataset ds = load_dataset(o.data, err);
  const auto parts = stratified_split(ds, spec);
  const double load_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
  err << "dataset: " << ds.n_rows() << " rows, " << ds.k << " binary features, "
      << ds.n_classes << " classes; split " << parts.train.n_rows() << '/'
      << parts.selection.n_rows() << '/' << parts.test.n_rows() << '\n';

  cfg.on_improve = [&](const Progress& p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%8.3fs] cost %llu\n", p.seconds,
                  static_cast<unsigned long long>(p.cost));
    err << buf << std::flush;
  };

  TrainResult res;
  try {
    res = train_split(parts.train, parts.selection, cfg);
  } catch (const TrainTimeout& e) {
    throw Failure{kTimeoutNoModel, std::string(e.what()) + " (greedy tree has " +
                                       std::to_string(e.greedy.size()) + " nodes)"};
  }

  const DecisionTree& model = res.model();
  const double test_acc = evaluate(model, parts.test);
  const double sel_acc = res.kept[res.chosen].accuracy;

  json report = report_json(res);
  report["dataset"] = {{"rows", ds.n_rows()},
                       {"features", ds.k},
                       {"classes", ds.n_classes},
                       {"train", parts.train.n_rows()},
                       {"selection", parts.selection.n_rows()},
                       {"test", parts.test.n_rows()}};
  report["model"] = {{"size", model.size()},
                     {"depth", model.depth()},
                     {"selection_accuracy", sel_acc},
                     {"train_accuracy", evaluate(model, parts.train)},
                     {"test_accuracy", test_acc}};

  json sols = json::array();
  for (std::size_t i = 0; i < res.solutions.size(); ++i) {
    const bool kept = std::any_of(res.kept.begin(), res.kept.end(),
                                  [&](const ScoredTree& s) { return s.index == i; });
    sols.push_back({{"index", i},
                    {"selection_accuracy", res.selection_accuracy[i]},
                    {"kept", kept},
                    {"tree", to_json(res.solutions[i])}});
  }

  const fs::path dir(o.out_dir);
  try {
    write_file_atomic(dir / "model.json", to_json(model).dump(2) + "\n");
    write_file_atomic(dir / "tree.dot", to_dot(model, ds.provenance, ds.class_names));
    write_file_atomic(dir / "report.json", report.dump(2) + "\n");
    write_file_atomic(dir / "solutions.json", json{{"solutions", sols}}.dump(2) + "\n");
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest{
        {"tool", "mpdt"},
        {"version", MPDT_VERSION},
        {"command", "train"},
        {"input", o.data.input},
        {"seed", o.seed},
        {"config", config_json(o)},
        {"times",
         {{"load", load_seconds},
          {"greedy", res.times.greedy},
          {"encode", res.times.encode},
          {"solve", res.times.solve},
          {"diverse", res.times.diverse},
          {"select", res.times.select},
          {"total", total}}},
        {"result",
         {{"status", to_string(res.status)},
          {"size", res.size},
          {"cost", res.cost},
          {"n_solutions", res.solutions.size()},
          {"selection_accuracy", sel_acc},
          {"test_accuracy", test_acc}}}};
    write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::runtime_error& e) {
    throw Failure{kConfigError, e.what()};
  }

  out << "status " << to_string(res.status) << '\n';
  out << "optimum size " << res.size << " (cost " << res.cost << ")\n";
  out << "solutions " << res.solutions.size() << (res.exhausted ? " (all)" : "") << '\n';
  out << "selection accuracy " << percent(sel_acc) << '\n';
  out << "test accuracy " << percent(test_acc) << '\n';
  return kOk;
}

// ---- evaluate ----------------------------------------------------------

struct EvaluateOptions {
  DataOptions data;
  std::string model;
  std::string run;
  std::string part = "all";
  std::vector<double> split{0.64, 0.16, 0.20};
  std::uint64_t seed = 0;
  double delta = 0;
  std::size_t resplits = 0;
  unsigned jobs = 1;
};

void check_width(const DecisionTree& t, const BinDataset& ds) {
  if (t.n_features != ds.k) {
    throw Failure{kConfigError, "model expects " + std::to_string(t.n_features) +
                                    " features, dataset has " + std::to_string(ds.k)};
  }
}

DecisionTree load_tree(const fs::path& path) {
  try {
    return tree_from_json(read_json(path));
  } catch (const std::invalid_argument& e) {
    throw Failure{kConfigError, path.string() + ": " + e.what()};
  }
}

int cmd_evaluate(EvaluateOptions o, std::ostream& out, std::ostream& err) {
  std::vector<DecisionTree> solutions;
  if (!o.run.empty()) {
    const json manifest = read_json(fs::path(o.run) / "manifest.json");
    TrainOptions t;
    load_config(manifest.at("config"), t);
    if (o.data.input.empty()) o.data = t.data;
    o.split = t.split;
    o.seed = t.seed;
    o.delta = t.delta;
    if (o.model.empty()) o.model = (fs::path(o.run) / "model.json").string();
    const json sols = read_json(fs::path(o.run) / "solutions.json");
    try {
      for (const auto& s : sols.at("solutions")) solutions.push_back(tree_from_json(s.at("tree")));
    } catch (const std::exception& e) {
      throw Failure{kConfigError, std::string("solutions.json: ") + e.what()};
    }
  }
  if (o.data.input.empty()) throw Failure{kConfigError, "--input or --run is required"};
  if (o.model.empty()) throw Failure{kConfigError, "--model or --run is required"};
  const DecisionTree model = load_tree(o.model);
  const BinDataset ds = load_dataset(o.data, err);
  check_width(model, ds);

  if (o.resplits > 0) {
    if (solutions.empty()) solutions.push_back(model);
    for (const auto& s : solutions) check_width(s, ds);
    const auto parts = stratified_split(ds, split_spec(o.split, o.seed));
    const auto pool = parts.selection.concat(parts.test);
    const auto r = resplit_evaluate(solutions, pool, parts.test.n_rows(), o.resplits, o.seed,
                                    o.delta, o.jobs);
    double lo = 1, hi = 0;
    for (double a : r.test_accuracy) {
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    out << "mean test accuracy over " << o.resplits << " resplits " << percent(r.mean)
        << " (min " << percent(lo) << ", max " << percent(hi) << ")\n";
    return kOk;
  }

  BinDataset target;
  if (o.part == "all") {
    target = ds;
  } else {
    const auto parts = stratified_split(ds, split_spec(o.split, o.seed));
    target = o.part == "train" ? parts.train : o.part == "selection" ? parts.selection : parts.test;
  }
  out << "accuracy " << percent(evaluate(model, target)) << " on " << target.n_rows()
      << " rows\n";
  return kOk;
}

// ---- encode ------------------------------------------------------------

struct EncodeOptions {
  DataOptions data;
  std::string ub = "auto";
  int lb = 3;
  std::string out;
  std::string layout;
};

int cmd_encode(const EncodeOptions& o, std::ostream& out, std::ostream& err) {
  int ub = 0;
  if (o.ub != "auto") {
    try {
      std::size_t used = 0;
      ub = std::stoi(o.ub, &used);
      if (used != o.ub.size()) throw std::invalid_argument(o.ub);
    } catch (const std::exception&) {
      throw Failure{kConfigError, "--ub must be an odd number or 'auto'"};
    }
    if (ub < 3 || ub % 2 == 0) throw Failure{kConfigError, "--ub must be odd and at least 3"};
    if (ub < o.lb) throw Failure{kConfigError, "--ub is below --lb"};
  }
  if (o.lb < 3 || o.lb % 2 == 0) throw Failure{kConfigError, "--lb must be odd and at least 3"};
  const BinDataset ds = load_dataset(o.data, err);
  if (ub == 0) {
    ub = greedy_upper_bound(ds).ub;
    err << "greedy upper bound " << ub << '\n';
    if (ub < 3) throw Failure{kConfigError, "dataset has a single class; nothing to encode"};
  }
  MpdtInstance inst = build(ds, ub, std::min(o.lb, ub));
  const fs::path path = o.out;
  const fs::path layout = o.layout.empty() ? fs::path(o.out + ".layout.json") : fs::path(o.layout);
  json side = inst.layout.to_json();
  side["ub"] = inst.ub;
  side["lb"] = inst.lb;
  side["examples"] = inst.n_examples;
  try {
    std::ostringstream w;
    write_wcnf(inst.formula, w);
    write_file_atomic(path, w.str());
    write_file_atomic(layout, side.dump() + "\n");
  } catch (const std::runtime_error& e) {
    throw Failure{kConfigError, e.what()};
  }
  out << "wrote " << path.string() << ": " << inst.formula.n_vars << " variables, "
      << inst.formula.hard.size() << " hard and " << inst.formula.soft.size()
      << " soft clauses\n";
  return kOk;
}

// ---- preprocess --------------------------------------------------------

int cmd_preprocess(const DataOptions& d, const std::string& out_path, std::ostream& out,
                   std::ostream& err) {
  const BinDataset ds = load_dataset(d, err);
  std::ostringstream w;
  write_binarized(ds, w);
  try {
    write_file_atomic(out_path, w.str());
  } catch (const std::runtime_error& e) {
    throw Failure{kConfigError, e.what()};
  }
  out << ds.n_rows() << " rows, " << ds.k << " binary features, " << ds.n_classes
      << " classes\n";
  for (std::size_t r = 0; r < ds.provenance.size(); ++r) {
    const auto& p = ds.provenance[r];
    out << "  f" << r << " = " << p.column_name;
    if (p.n_bits > 1) out << " bit " << p.bit << " of " << p.n_bits;
    out << '\n';
  }
  return kOk;
}

// ---- export ------------------------------------------------------------

int cmd_export(const std::string& model_path, const std::string& format,
               const std::string& out_path, const DataOptions& d, std::ostream& out,
               std::ostream& err) {
  const DecisionTree t = load_tree(model_path);
  BinDataset ds;
  if (!d.input.empty()) {
    ds = load_dataset(d, err);
    check_width(t, ds);
  }
  try {
    export_tree(t, format == "dot" ? ExportFormat::kDot : ExportFormat::kJson, out_path,
                ds.provenance, ds.class_names);
  } catch (const std::runtime_error& e) {
    throw Failure{kConfigError, e.what()};
  }
  out << "wrote " << out_path << '\n';
  return kOk;
}

// ---- sat / maxsat / oracle ---------------------------------------------

void print_model(std::ostream& out, const std::vector<bool>& model, int n_vars) {
  out << 'v';
  for (int v = 1; v <= n_vars; ++v) out << ' ' << (model[static_cast<std::size_t>(v)] ? v : -v);
  out << " 0\n";
}

int cmd_sat(const std::string& path, double timeout, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw Failure{kConfigError, "cannot read " + path};
  CnfFormula f;
  try {
    f = read_dimacs(in);
  } catch (const std::exception& e) {
    throw Failure{kConfigError, e.what()};
  }
  sat::Solver s;
  s.ensure_var(f.n_vars);
  for (const auto& c : f.clauses) s.add_clause(c);
  s.set_deadline(deadline_after(positive_or_none(timeout)));
  switch (s.solve()) {
    case sat::Result::kSat:
      out << "s SATISFIABLE\n";
      print_model(out, s.model(), f.n_vars);
      return kOk;
    case sat::Result::kUnsat:
      out << "s UNSATISFIABLE\n";
      return kOk;
    default:
      out << "s UNKNOWN\n";
      return kTimeoutNoModel;
  }
}

int cmd_maxsat(const std::string& path, double timeout, std::ostream& out, std::ostream& err) {
  WcnfFormula f;
  try {
    f = read_wcnf(fs::path(path));
  } catch (const std::exception& e) {
    throw Failure{kConfigError, e.what()};
  }
  MaxSatOptions opts;
  opts.deadline = deadline_after(positive_or_none(timeout));
  opts.on_improve = [&](const Progress& p) {
    err << "c cost " << p.cost << " after " << p.seconds << "s\n" << std::flush;
  };
  const auto r = linear_maxsat(f, opts);
  switch (r.status) {
    case SolveStatus::kOptimal:
      out << "o " << r.cost << "\ns OPTIMUM FOUND\n";
      break;
    case SolveStatus::kFeasible:
      out << "o " << r.cost << "\ns SATISFIABLE\n";
      break;
    case SolveStatus::kUnsat:
      out << "s UNSATISFIABLE\n";
      return kOk;
    case SolveStatus::kTimeout:
      out << "s UNKNOWN\n";
      return kTimeoutNoModel;
  }
  print_model(out, r.model, f.n_vars);
  return kOk;
}

int cmd_oracle(const DataOptions& d, std::ostream& out, std::ostream& err) {
  const BinDataset ds = load_dataset(d, err);
  try {
    const auto r = oracle::brute_force_mpdt(ds, {6, 24, 21, 20});
    out << "minimum pure tree size " << r.size << '\n';
  } catch (const oracle::BudgetExceeded& e) {
    throw Failure{kConfigError, e.what()};
  }
  return kOk;
}

// Value of --from-manifest, if present, so its config can seed the defaults
// that explicit flags then override.
std::optional<std::string> manifest_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--from-manifest" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--from-manifest=", 0) == 0) return args[i].substr(16);
  }
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum pure decision trees via MaxSAT"};
  app.name("mpdt");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("mpdt ") + MPDT_VERSION);

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "train, select and export a tree from a CSV");
  add_data_options(c_train, train.data);
  c_train->add_option("--split", train.split, "train,selection,test fractions")
      ->delimiter(',')
      ->expected(3);
  c_train->add_option("--seed", train.seed);
  c_train->add_option("--k", train.k, "diverse solutions to request")->check(CLI::PositiveNumber);
  c_train->add_option("--delta", train.delta, "selection accuracy tolerance")
      ->check(CLI::NonNegativeNumber);
  c_train->add_option("--timeout", train.timeout, "seconds for the whole run (0 = none)")
      ->envname("MPDT_TIMEOUT")
      ->check(CLI::NonNegativeNumber);
  c_train->add_option("--lb", train.lb, "lower bound on the tree size");
  c_train->add_flag("--accept-suboptimal-diverse", train.accept_suboptimal_diverse,
                    "keep diverse solutions whose search was cut short");
  c_train->add_flag("--greedy-fallback", train.greedy_fallback,
                    "on timeout without a model, export the greedy tree");
  c_train->add_option("--out,-o", train.out_dir, "output directory");
  c_train->add_option("--from-manifest", train.from_manifest,
                      "rerun the configuration recorded in a manifest");

  EvaluateOptions eval;
  auto* c_eval = app.add_subcommand("evaluate", "accuracy of a trained model");
  c_eval->add_option("--input,-i", eval.data.input);
  c_eval->add_option("--label", eval.data.label);
  c_eval->add_option("--bins", eval.data.bins)->check(CLI::PositiveNumber);
  c_eval->add_flag("--resolve-conflicts", eval.data.resolve_conflicts);
  c_eval->add_option("--model,-m", eval.model, "tree JSON");
  c_eval->add_option("--run", eval.run, "output directory of a train run");
  c_eval->add_option("--part", eval.part)
      ->check(CLI::IsMember({"all", "train", "selection", "test"}));
  c_eval->add_option("--split", eval.split)->delimiter(',')->expected(3);
  c_eval->add_option("--seed", eval.seed);
  c_eval->add_option("--delta", eval.delta)->check(CLI::NonNegativeNumber);
  c_eval->add_option("--resplits", eval.resplits,
                     "re-divide selection and test rows this many times");
  c_eval->add_option("--jobs,-j", eval.jobs)->check(CLI::PositiveNumber);

  EncodeOptions enc;
  auto* c_enc = app.add_subcommand("encode", "write the MaxSAT instance of a dataset");
  add_data_options(c_enc, enc.data);
  c_enc->add_option("--ub", enc.ub, "odd upper bound on the tree size, or auto");
  c_enc->add_option("--lb", enc.lb);
  c_enc->add_option("--out,-o", enc.out, "WCNF file")->required();
  c_enc->add_option("--layout", enc.layout, "variable layout JSON (default: <out>.layout.json)");

  DataOptions pre;
  std::string pre_out;
  auto* c_pre = app.add_subcommand("preprocess", "discretize and binarize a CSV");
  add_data_options(c_pre, pre);
  c_pre->add_option("--out,-o", pre_out)->required();

  std::string exp_model, exp_format = "dot", exp_out;
  DataOptions exp_data;
  auto* c_exp = app.add_subcommand("export", "convert a tree to DOT or JSON");
  c_exp->add_option("--model,-m", exp_model)->required();
  c_exp->add_option("--format", exp_format)->check(CLI::IsMember({"dot", "json"}));
  c_exp->add_option("--out,-o", exp_out)->required();
  c_exp->add_option("--input,-i", exp_data.input, "dataset for feature and class names");
  c_exp->add_option("--label", exp_data.label);
  c_exp->add_option("--bins", exp_data.bins);

  std::string solver_input;
  double solver_timeout = 0;
  auto* c_sat = app.add_subcommand("sat", "solve a DIMACS CNF");
  c_sat->add_option("input", solver_input)->required();
  c_sat->add_option("--timeout", solver_timeout)->envname("MPDT_TIMEOUT");
  auto* c_max = app.add_subcommand("maxsat", "solve a WCNF by linear search");
  c_max->add_option("input", solver_input)->required();
  c_max->add_option("--timeout", solver_timeout)->envname("MPDT_TIMEOUT");

  DataOptions orc;
  auto* c_orc = app.add_subcommand("oracle", "exhaustive minimum tree search (tiny data)");
  c_orc->group("");
  add_data_options(c_orc, orc);

  try {
    if (auto m = manifest_arg(args)) {
      const json manifest = read_json(*m);
      if (!manifest.contains("config")) throw Failure{kConfigError, *m + ": no config"};
      load_config(manifest["config"], train);
      // The manifest's input satisfies --input.
      c_train->get_option("--input")->required(false);
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kConfigError;
    }

    if (c_train->parsed()) return cmd_train(train, out, err);
    if (c_eval->parsed()) return cmd_evaluate(eval, out, err);
    if (c_enc->parsed()) return cmd_encode(enc, out, err);
    if (c_pre->parsed()) return cmd_preprocess(pre, pre_out, out, err);
    if (c_exp->parsed()) return cmd_export(exp_model, exp_format, exp_out, exp_data, out, err);
    if (c_sat->parsed()) return cmd_sat(solver_input, solver_timeout, out);
    if (c_max->parsed()) return cmd_maxsat(solver_input, solver_timeout, out, err);
    if (c_orc->parsed()) return cmd_oracle(orc, out, err);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const InseparableError& e) {
    err << "error: " << e.what() << '\n';
    return kInseparable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace mpdt::cli
