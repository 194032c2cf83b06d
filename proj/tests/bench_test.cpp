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


#include "tmiqp/bench.hpp"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "tmiqp/builtin.hpp"

namespace tmiqp::bench {
namespace {

BenchConfig small_config() {
  BenchConfig cfg;
  cfg.instance = builtin::example1(4, 1.0);
  cfg.x0.list = {Vector::Constant(1, 1.0), Vector::Constant(1, -0.5)};
  cfg.N_list = {4, 5};
  cfg.strategies = {make_strategy("std", ""), make_strategy("weighted", "tail:2,3")};
  return cfg;
}

TEST(ExpandTest, ListAndLinspace) {
  X0Sweep s;
  s.list = {Vector::Constant(2, 3.0)};
  s.linspace = true;
  s.lo = -1.0;
  s.hi = 1.0;
  s.count = 3;
  const auto x0 = expand(s, 2);
  ASSERT_EQ(x0.size(), 4u);
  EXPECT_EQ(x0[0], Vector::Constant(2, 3.0));
  EXPECT_EQ(x0[1], Vector::Constant(2, -1.0));
  EXPECT_EQ(x0[2], Vector::Constant(2, 0.0));
  EXPECT_EQ(x0[3], Vector::Constant(2, 1.0));
}

TEST(ExpandTest, SeededNoiseIsReproducible) {
  X0Sweep s;
  s.linspace = true;
  s.lo = 0.0;
  s.hi = 1.0;
  s.count = 5;
  s.noise = 0.1;
  EXPECT_THROW(expand(s, 3), std::invalid_argument);
  s.seed = 7;
  const auto a = expand(s, 3);
  const auto b = expand(s, 3);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    const double c = 0.25 * static_cast<double>(i);
    EXPECT_LE((a[i].array() - c).abs().maxCoeff(), 0.1);
  }
  s.seed = 8;
  EXPECT_NE(expand(s, 3)[0], a[0]);
}

TEST(ExpandTest, WrongDimension) {
  X0Sweep s;
  s.list = {Vector::Zero(2)};
  EXPECT_THROW(expand(s, 3), std::invalid_argument);
}

TEST(MakeStrategyTest, Recipes) {
  EXPECT_FALSE(make_strategy("std", "table1").weighted);
  const auto t = make_strategy("weighted", "tail:2,3,6");
  EXPECT_EQ(t.recipe, Recipe::Tail);
  EXPECT_EQ(t.k_hat, (std::vector<int>{2, 3, 6}));
  EXPECT_EQ(make_strategy("weighted", "table1").recipe, Recipe::Table1);
  EXPECT_THROW(make_strategy("weighted", "tail:"), std::invalid_argument);
  EXPECT_THROW(make_strategy("weighted", "tail:2,x"), std::invalid_argument);
  EXPECT_THROW(make_strategy("weighted", "magic"), std::invalid_argument);
  EXPECT_THROW(make_strategy("fast", ""), std::invalid_argument);
}

TEST(RunBenchTest, EmptySweepHasNoRows) {
  BenchConfig cfg = small_config();
  cfg.x0.list.clear();
  const BenchReport rep = run_bench(cfg);
  EXPECT_TRUE(rep.runs.empty());
  EXPECT_TRUE(rep.aggregate.empty());
}

TEST(RunBenchTest, CellsAndOracleReference) {
  const BenchReport rep = run_bench(small_config());
  // (1 std + 2 tail guesses) x 2 N x 2 x0.
  ASSERT_EQ(rep.runs.size(), 12u);
  for (const auto& r : rep.runs) {
    EXPECT_EQ(r.status, "optimal");
    EXPECT_EQ(r.reference, "oracle");
    EXPECT_NEAR(r.subopt, 0.0, 1e-6);
  }
  EXPECT_EQ(rep.runs[0].guess, "-");
  EXPECT_EQ(rep.runs[4].guess, "k=2");
  EXPECT_EQ(rep.aggregate.size(), 2u * 2u * 7u);
}

TEST(RunBenchTest, DeterministicWithoutTimes) {
  BenchConfig cfg = small_config();
  auto render = [](const BenchReport& rep) {
    std::ostringstream os;
    write_runs_csv(os, rep.runs, false);
    write_aggregate_csv(os, rep.aggregate, false);
    return os.str();
  };
  const std::string a = render(run_bench(cfg));
  cfg.jobs = 2;
  EXPECT_EQ(render(run_bench(cfg)), a);
}

TEST(RunBenchTest, FailuresBecomeRows) {
  BenchConfig cfg = small_config();
  cfg.N_list = {4, 1};  // k_hat = 2 and 3 do not fit a horizon of 1
  const BenchReport rep = run_bench(cfg);
  int errors = 0;
  for (const auto& r : rep.runs) errors += r.status.rfind("error: ", 0) == 0 ? 1 : 0;
  EXPECT_EQ(errors, 4);
}

TEST(AggregateTest, RecomputesFromRuns) {
  std::vector<RunRow> runs(3);
  const double nodes[] = {10, 4, 7};
  const double ms[] = {100, 300, 200};
  for (int i = 0; i < 3; ++i) {
    runs[i].strategy = "std";
    runs[i].N = 8;
    runs[i].nodes = static_cast<long long>(nodes[i]);
    runs[i].wall_ms = ms[i];
    runs[i].subopt = i == 0 ? 0.3 : 0.0;
  }
  const auto agg = aggregate(runs);
  ASSERT_EQ(agg.size(), 7u);
  auto value = [&](const std::string& m) {
    for (const auto& a : agg) {
      if (a.metric == m) return a.value;
    }
    return std::nan("");
  };
  EXPECT_DOUBLE_EQ(value("avg_nodes"), 7.0);
  EXPECT_DOUBLE_EQ(value("median_nodes"), 7.0);
  EXPECT_DOUBLE_EQ(value("best_nodes"), 4.0);
  EXPECT_DOUBLE_EQ(value("avg_runtime_s"), 0.2);
  EXPECT_DOUBLE_EQ(value("median_runtime_s"), 0.2);
  EXPECT_DOUBLE_EQ(value("best_runtime_s"), 0.1);
  EXPECT_DOUBLE_EQ(value("avg_subopt"), 0.1);
}

TEST(MedianTest, EvenAndOdd) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(CsvTest, StatusIsQuoted) {
  RunRow r;
  r.strategy = "std";
  r.guess = "-";
  r.status = "error: bad \"x0\", really";
  std::ostringstream os;
  write_runs_csv(os, {r});
  EXPECT_NE(os.str().find("\"error: bad \"\"x0\"\", really\""), std::string::npos);
}

TEST(FormatDoubleTest, RoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-kInf), "-inf");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace tmiqp::bench
