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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mpdt::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = MPDT_DATA_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run mpdt(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mpdt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndBadArguments) {
  EXPECT_EQ(mpdt({"--help"}).code, kOk);
  EXPECT_EQ(mpdt({}).code, kConfigError);
  EXPECT_EQ(mpdt({"train"}).code, kConfigError);
  EXPECT_EQ(mpdt({"frobnicate"}).code, kConfigError);
}

TEST_F(CliTest, EncodeRejectsEvenBound) {
  const auto csv = write("one.csv", "x,class\n0,a\n1,b\n");
  const auto r = mpdt({"encode", "-i", csv, "--ub", "4", "-o", path("e.wcnf")});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_FALSE(fs::exists(path("e.wcnf")));
}

TEST_F(CliTest, EncodeOneFeature) {
  const auto csv = write("one.csv", "x,class\n0,a\n1,b\n");
  ASSERT_EQ(mpdt({"encode", "-i", csv, "--ub", "7", "-o", path("e.wcnf")}).code, kOk);
  std::istringstream in(slurp(path("e.wcnf")));
  std::string p, fmt;
  long vars = 0, clauses = 0, top = 0;
  in >> p >> fmt >> vars >> clauses >> top;
  EXPECT_EQ(top, 5);
  std::size_t soft = 0;
  for (std::string line; std::getline(in, line);) soft += line.rfind("1 ", 0) == 0;
  EXPECT_EQ(soft, 4u);
  const auto layout = nlohmann::json::parse(slurp(path("e.wcnf.layout.json")));
  EXPECT_EQ(layout.at("ub").get<int>(), 7);
}

TEST_F(CliTest, EncodeAutoBound) {
  ASSERT_EQ(mpdt({"encode", "-i", kData + "/mux6.csv", "--ub", "auto", "-o", path("m.wcnf")}).code,
            kOk);
  const auto layout = nlohmann::json::parse(slurp(path("m.wcnf.layout.json")));
  const int ub = layout.at("ub").get<int>();
  std::istringstream in(slurp(path("m.wcnf")));
  std::string p, fmt;
  long vars = 0, clauses = 0, top = 0;
  in >> p >> fmt >> vars >> clauses >> top;
  EXPECT_EQ(top, (ub + 1) / 2 + 1);
}

TEST_F(CliTest, ConflictsExitTwo) {
  const auto csv = write("c.csv", "x,y,class\n0,0,a\n0,0,b\n1,0,a\n1,1,b\n");
  const auto r = mpdt({"train", "-i", csv, "-o", path("out")});
  EXPECT_EQ(r.code, kInseparable);
  EXPECT_NE(r.err.find("rows 1 (a) 2 (b)"), std::string::npos) << r.err;
  EXPECT_EQ(mpdt({"train", "-i", csv, "-o", path("out"), "--resolve-conflicts"}).code, kOk);
}

TEST_F(CliTest, TrainMux6) {
  const auto r = mpdt({"train", "-i", kData + "/mux6.csv", "-o", path("run")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("optimum size 15"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(path("run/report.json")));
  EXPECT_EQ(report.at("size").get<int>(), 15);
  EXPECT_EQ(report.at("model").at("test_accuracy").get<double>(), 1.0);
  for (const char* f : {"model.json", "tree.dot", "solutions.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(path("run/") + f)) << f;
  }
  auto e = mpdt({"evaluate", "--run", path("run"), "--part", "train"});
  EXPECT_EQ(e.code, kOk);
  EXPECT_NE(e.out.find("accuracy 100.0"), std::string::npos);
  e = mpdt({"evaluate", "--run", path("run"), "--part", "test"});
  EXPECT_NE(e.out.find("accuracy 100.0"), std::string::npos);
  e = mpdt({"evaluate", "--run", path("run"), "--resplits", "10", "--jobs", "3"});
  EXPECT_EQ(e.code, kOk);
  EXPECT_NE(e.out.find("mean test accuracy over 10 resplits 100.0"), std::string::npos) << e.out;
}

TEST_F(CliTest, TrainCorral) {
  const auto r = mpdt({"train", "-i", kData + "/corral.csv", "-o", path("run")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("optimum size 13"), std::string::npos);
}

TEST_F(CliTest, SameSeedSameFiles) {
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(mpdt({"train", "-i", kData + "/mux6.csv", "--seed", "9", "-o", path(out)}).code, kOk);
  }
  for (const char* f : {"model.json", "report.json", "solutions.json", "tree.dot"}) {
    EXPECT_EQ(slurp(path("a/") + f), slurp(path("b/") + f)) << f;
  }
}

TEST_F(CliTest, ManifestReproducesRun) {
  ASSERT_EQ(mpdt({"train", "-i", kData + "/mux6.csv", "--seed", "4", "--k", "5", "-o", path("a")}).code,
            kOk);
  const auto r = mpdt({"train", "--from-manifest", path("a/manifest.json"), "-o", path("b")});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(slurp(path("a/report.json")), slurp(path("b/report.json")));
  EXPECT_EQ(slurp(path("a/model.json")), slurp(path("b/model.json")));
  const auto m = nlohmann::json::parse(slurp(path("b/manifest.json")));
  EXPECT_EQ(m.at("config").at("k").get<int>(), 5);
  EXPECT_EQ(m.at("config").at("seed").get<int>(), 4);
}

TEST_F(CliTest, TimeoutWithoutModel) {
  auto r = mpdt({"train", "-i", kData + "/mux6.csv", "--timeout", "1e-9", "-o", path("run")});
  EXPECT_EQ(r.code, kTimeoutNoModel);
  ::setenv("MPDT_TIMEOUT", "1e-9", 1);
  r = mpdt({"train", "-i", kData + "/mux6.csv", "-o", path("run")});
  ::unsetenv("MPDT_TIMEOUT");
  EXPECT_EQ(r.code, kTimeoutNoModel);
  r = mpdt({"train", "-i", kData + "/mux6.csv", "--timeout", "1e-9", "--greedy-fallback", "-o",
            path("run")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("status TIMEOUT"), std::string::npos);
}

TEST_F(CliTest, EvaluateMismatch) {
  ASSERT_EQ(mpdt({"train", "-i", kData + "/mux6.csv", "-o", path("run")}).code, kOk);
  const auto csv = write("one.csv", "x,class\n0,a\n1,b\n");
  EXPECT_EQ(mpdt({"evaluate", "-m", path("run/model.json"), "-i", csv}).code, kConfigError);
}

TEST_F(CliTest, ExportAndSolvers) {
  ASSERT_EQ(mpdt({"train", "-i", kData + "/mux6.csv", "-o", path("run")}).code, kOk);
  EXPECT_EQ(mpdt({"export", "-m", path("run/model.json"), "--format", "json", "-o", path("t.json")})
                .code,
            kOk);
  EXPECT_EQ(slurp(path("t.json")), slurp(path("run/model.json")));
  EXPECT_EQ(mpdt({"export", "-m", path("run/model.json"), "-o", path("none/t.dot")}).code,
            kConfigError);

  const auto cnf = write("a.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
  EXPECT_EQ(mpdt({"sat", cnf}).out, "s SATISFIABLE\nv -1 2 0\n");
  const auto wcnf = write("a.wcnf", "p wcnf 2 3 9\n9 1 2 0\n1 -1 0\n1 -2 0\n");
  const auto m = mpdt({"maxsat", wcnf});
  EXPECT_EQ(m.code, kOk);
  EXPECT_EQ(m.out.rfind("o 1\ns OPTIMUM FOUND\n", 0), 0u) << m.out;
}

}  // namespace
}  // namespace mpdt::cli
