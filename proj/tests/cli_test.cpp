// Copyright 2026 The tmiqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gtest/gtest.h"

namespace tmiqp::cli {
namespace {

struct Outcome {
  int code = 0;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "tmiqp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CliTest, SolveBuiltin) {
  const Outcome o = call({"solve", "--builtin", "illustrative", "--N", "3", "--x0", "1"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_NEAR(j["J"].get<double>(), 0.0, 1e-6);
  EXPECT_EQ(j["trajectory"]["u"].size(), 3u);
}

TEST(CliTest, SolveWithRecipeMatchesPlainSolve) {
  const Outcome plain = call({"solve", "--builtin", "example1", "--N", "6"});
  const Outcome tail = call({"solve", "--builtin", "example1", "--N", "6", "--strategy",
                             "weighted", "--recipe", "tail:3"});
  ASSERT_EQ(plain.code, kOk) << plain.err;
  ASSERT_EQ(tail.code, kOk) << tail.err;
  EXPECT_NEAR(nlohmann::json::parse(plain.out)["J"].get<double>(),
              nlohmann::json::parse(tail.out)["J"].get<double>(), 1e-6);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(call({"solve", "--instance", "/nonexistent/file.json"}).code, kError);
  EXPECT_EQ(call({"solve", "--builtin", "nope"}).code, kError);
  EXPECT_EQ(call({"solve", "--builtin", "example1", "--N", "10", "--node-limit", "1"}).code,
            kSuboptimal);
  EXPECT_EQ(call({"frobnicate"}).code, kError);
}

TEST(CliTest, InfeasibleInstanceFile) {
  const auto dir = fresh_dir("tmiqp_cli_infeasible");
  ASSERT_EQ(call({"instances", "--out", dir.string()}).code, kOk);
  auto j = nlohmann::json::parse(read(dir / "illustrative.json"));
  j["N"] = 2;
  j["mixed"] = nlohmann::json::parse(R"([{"gu": [1], "lo": 5}])");
  const auto path = dir / "empty.json";
  std::ofstream(path) << j.dump();
  const Outcome o = call({"solve", "--instance", path.string(), "--x0", "1"});
  EXPECT_EQ(o.code, kInfeasible) << o.err;
  EXPECT_TRUE(nlohmann::json::parse(o.out)["trajectory"].is_null());
}

TEST(CliTest, TraceFile) {
  const auto dir = fresh_dir("tmiqp_cli_trace");
  const Outcome o = call({"solve", "--builtin", "illustrative", "--N", "2", "--trace", "--out",
                          dir.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  std::istringstream lines(read(dir / "trace.jsonl"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_TRUE(nlohmann::json::parse(line).contains("U"));
    ++count;
  }
  EXPECT_EQ(count, nlohmann::json::parse(o.out)["nodes"].get<int>());
}

TEST(CliTest, BenchWritesBothTables) {
  const auto dir = fresh_dir("tmiqp_cli_bench");
  const Outcome o = call({"bench", "--builtin", "example1", "--N-list", "4,5", "--linspace",
                          "-1,1,3", "--recipe", "tail:2", "--out", dir.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  const std::string runs = read(dir / "runs.csv");
  const std::string agg = read(dir / "aggregate.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 2 + 2 * 2 * 3);
  EXPECT_EQ(agg.rfind("strategy,N,metric,value\n", 0), 0u);
  EXPECT_EQ(std::count(agg.begin(), agg.end(), '\n'), 1 + 2 * 2 * 7);
}

TEST(CliTest, TurnpikeOutputs) {
  const auto dir = fresh_dir("tmiqp_cli_turnpike");
  const Outcome o = call({"turnpike", "--builtin", "illustrative", "--x0", "2", "--N-list",
                          "8,12", "--eps", "0.1", "--eps", "0.5", "--out", dir.string()});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto j = nlohmann::json::parse(read(dir / "turnpike.json"));
  EXPECT_NEAR(j["z_bar"]["x"][0].get<double>(), 1.0, 1e-7);
  const std::string csv = read(dir / "turnpike.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 2);
  EXPECT_TRUE(std::filesystem::exists(dir / "trajectory_x0_N12.csv"));
}

TEST(CliTest, Certify) {
  const Outcome o = call({"certify", "--builtin", "illustrative"});
  ASSERT_EQ(o.code, kOk) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["status"], "certified");
  EXPECT_NEAR(j["P"][0][0].get<double>(), -0.01 / 3.0, 1e-10);
}

TEST(CliTest, InstancesList) {
  const Outcome o = call({"instances"});
  ASSERT_EQ(o.code, kOk);
  EXPECT_NE(o.out.find("example2"), std::string::npos);
}

}  // namespace
}  // namespace tmiqp::cli
