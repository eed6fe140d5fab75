// Copyright 2026 The gapsolve Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gap_cli.hpp"

namespace gap {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("gap_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

 private:
  fs::path dir_;
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kForced =
    R"({"s":1,"t":2,"cost":[[5,7]],"a_demand":[2],"a_capacity":[2],"b_demand":[1,1],"b_capacity":[1,1]})";

TEST(ParseInstance, ValidFile) {
  TempDir tmp;
  const auto path = tmp.write(
      "ok.json",
      R"({"s":2,"t":2,"cost":[[1,2],[3,1]],"a_demand":[1,1],"a_capacity":[1,1],"b_demand":[1,1],"b_capacity":[1,1]})");
  const auto inst = parse_instance(path);
  EXPECT_EQ(inst.s, 2);
  EXPECT_EQ(inst.t, 2);
}

TEST(ParseInstance, MissingKeyIsNamed) {
  TempDir tmp;
  const auto path = tmp.write(
      "missing.json",
      R"({"s":1,"t":1,"cost":[[1]],"a_demand":[1],"a_capacity":[1],"b_capacity":[1]})");
  try {
    parse_instance(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("b_demand"), std::string::npos);
  }
}

TEST(ParseInstance, ShortCostRow) {
  TempDir tmp;
  const auto path = tmp.write(
      "short.json",
      R"({"s":1,"t":2,"cost":[[1]],"a_demand":[1],"a_capacity":[1],"b_demand":[0,0],"b_capacity":[1,1]})");
  try {
    parse_instance(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("\"cost\"[0]"), std::string::npos);
  }
}

TEST(Cli, SolveForcedInstance) {
  TempDir tmp;
  const auto path = tmp.write("forced.json", kForced);
  for (const std::string alg : {"ga", "flow", "brute"}) {
    const auto r = run({"solve", "--algorithm", alg, path});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["total_cost"], 12);
    EXPECT_TRUE(j["feasible"].get<bool>());
    EXPECT_EQ(j["algorithm"], alg);
  }
  EXPECT_EQ(run({"solve", "--algorithm", "lca", path}).code, 1);  // demand 2
}

TEST(Cli, SolveOutputPassesVerify) {
  TempDir tmp;
  Rng rng(3);
  GenParams p;
  for (int k = 0; k < 20; ++k) {
    const auto inst = tmp.write("i.json", to_json(random_feasible_instance(p, rng)).dump());
    const auto solved = run({"solve", "--algorithm", "ga", inst});
    ASSERT_EQ(solved.code, 0) << solved.err;
    const auto asg = tmp.write("a.json", solved.out);
    const auto v = run({"verify", inst, "--assignment", asg});
    EXPECT_EQ(v.code, 0) << v.out;
  }
}

TEST(Cli, VerifyDegreeViolation) {
  TempDir tmp;
  const auto inst = tmp.write("forced.json", kForced);
  const auto asg = tmp.write("asg.json", "[[0,0]]");
  const auto r = run({"verify", inst, "--assignment", asg});
  EXPECT_EQ(r.code, 2);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_FALSE(j["feasible"].get<bool>());
  EXPECT_EQ(j["degree_violations"].size(), 2u);
}

TEST(Cli, VerifyRejectsWrongClaimedCost) {
  TempDir tmp;
  const auto inst = tmp.write("forced.json", kForced);
  const auto asg = tmp.write("asg.json", R"({"pairs":[[0,0],[0,1]],"total_cost":11})");
  EXPECT_EQ(run({"verify", inst, "--assignment", asg}).code, 2);
}

TEST(Cli, InfeasibleInstanceExitsTwo) {
  TempDir tmp;
  const auto inst = tmp.write(
      "inf.json",
      R"({"s":2,"t":2,"cost":[[1,1],[1,1]],"a_demand":[2,0],"a_capacity":[2,2],"b_demand":[2,0],"b_capacity":[2,0]})");
  for (const std::string alg : {"ga", "flow", "brute"}) {
    const auto r = run({"solve", "--algorithm", alg, inst});
    EXPECT_EQ(r.code, 2) << alg;
    EXPECT_FALSE(nlohmann::json::parse(r.out)["feasible"].get<bool>());
  }
}

TEST(Cli, UsageAndParseErrorsExitOne) {
  TempDir tmp;
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"solve", "--algorithm", "simplex", "x.json"}).code, 1);
  EXPECT_EQ(run({"gen", "--s", "2", "--t", "2", "--seed", "1", "--bogus"}).code, 1);
  EXPECT_EQ(run({"solve", "--algorithm", "ga", tmp.write("bad.json", "{not json")}).code, 1);
  const auto neg = tmp.write(
      "neg.json",
      R"({"s":1,"t":1,"cost":[[-1]],"a_demand":[0],"a_capacity":[1],"b_demand":[0],"b_capacity":[1]})");
  const auto r = run({"solve", "--algorithm", "ga", neg});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(rule::kNegativeCost), std::string::npos);
}

TEST(Cli, GenIsReproducible) {
  const std::vector<std::string> args{"gen",        "--s",       "5", "--t", "3", "--seed", "11",
                                      "--cost-max", "50",        "--cap-max", "2"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto inst = instance_from_json(nlohmann::json::parse(a.out));
  EXPECT_EQ(inst.s, 5);
  EXPECT_EQ(inst.t, 3);
  EXPECT_TRUE(oracle::feasibility_check(inst).feasible);
  auto ones = args;
  ones.push_back("--demands-one");
  const auto u = instance_from_json(nlohmann::json::parse(run(ones).out));
  EXPECT_TRUE(all_demands_one(u));
}

TEST(Cli, DiffIsDeterministicAndAgrees) {
  const std::vector<std::string> args{"diff",    "--trials", "50", "--seed", "7",
                                      "--max-s", "3",        "--max-t", "3"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::string line;
  int records = 0;
  nlohmann::json last;
  while (std::getline(lines, line)) {
    last = nlohmann::json::parse(line);
    ++records;
  }
  EXPECT_EQ(records, 51);
  EXPECT_EQ(last["disagreements"], 0);
}

TEST(Cli, BenchReportsSlope) {
  const auto r = run({"bench", "--algorithm", "ga", "--sizes", "4,8,16", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<nlohmann::json> recs;
  while (std::getline(lines, line)) recs.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[2]["n"], 16);
  EXPECT_TRUE(recs[3]["loglog_slope"].is_number());
}

TEST(LogLogSlope, Exact) {
  const auto slope = cli::loglog_slope({1, 2, 4, 8}, {1, 8, 64, 512});
  ASSERT_TRUE(slope);
  EXPECT_NEAR(*slope, 3.0, 1e-12);
  EXPECT_FALSE(cli::loglog_slope({5}, {1}));
}

TEST(CliBinary, ExitStatusesThroughProcess) {
  TempDir tmp;
  const auto inst = tmp.write("forced.json", kForced);
  const auto asg = tmp.write("asg.json", "[[0,0]]");
  auto status = [](const std::string& cmd) {
    const int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  const std::string bin = GAP_CLI_PATH;
  EXPECT_EQ(status(bin + " solve --algorithm ga " + inst), 0);
  EXPECT_EQ(status(bin + " verify " + inst + " --assignment " + asg), 2);
  EXPECT_EQ(status(bin + " nosuchcommand"), 1);
  EXPECT_EQ(status("GAP_LOG=loud " + bin + " solve --algorithm ga " + inst), 1);
  EXPECT_EQ(status("GAP_LOG=trace " + bin + " solve --algorithm ga " + inst), 0);
}

}  // namespace
}  // namespace gap
