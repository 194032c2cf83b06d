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

#ifndef TMIQP_BENCH_HPP
#define TMIQP_BENCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tmiqp/bnb.hpp"
#include "tmiqp/model.hpp"

namespace tmiqp::bench {

/// Initial states of a sweep. Either an explicit list, or `count` points
/// c in linspace(lo, hi) mapped to x0 = c * ones(nx) + r, with r uniform in
/// [-noise, noise]^nx drawn from a generator seeded with `seed`.
struct X0Sweep {
  std::vector<Vector> list;
  bool linspace = false;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
  double noise = 0.0;
  std::optional<std::uint64_t> seed;
};

/// Throws std::invalid_argument when noise is requested without a seed or
/// a listed state has the wrong dimension.
std::vector<Vector> expand(const X0Sweep& sweep, int nx);

enum class Recipe { None, Table1, Tail };

/// "std" runs without guesses. "weighted" with the table1 recipe passes the
/// six plateau templates at once; with the tail recipe every k_hat is a
/// separate run carrying one guess of dominant weight.
struct StrategySpec {
  std::string label;
  bool weighted = false;
  Recipe recipe = Recipe::None;
  std::vector<int> k_hat;
};

/// Parses "std", "weighted", "table1" or "tail:2,3,4" style recipe names.
StrategySpec make_strategy(const std::string& strategy, const std::string& recipe);

struct BenchConfig {
  MiocpInstance instance;  // x0 and N are overridden per run
  X0Sweep x0;
  std::vector<int> N_list;
  std::vector<StrategySpec> strategies;
  bnb::BnbConfig bnb;
  int jobs = 1;
  long long oracle_limit = 4096;
};

struct RunRow {
  std::string strategy;
  std::string guess;  // "-" without guesses, "table1" or "k=<k_hat>"
  int x0_id = 0;
  int N = 0;
  std::string status;
  long long nodes = 0;
  long long qp_iters = 0;
  double wall_ms = 0.0;
  double J = kInf;
  double gap = kInf;
  double subopt = kInf;
  std::string reference;  // "oracle", "best" or "none"
};

struct AggregateRow {
  std::string strategy;
  int N = 0;
  std::string metric;
  double value = 0.0;
};

struct BenchReport {
  std::vector<RunRow> runs;
  std::vector<AggregateRow> aggregate;
};

/// Runs every (strategy, guess, x0, N) cell. Failed cells become rows with
/// an error status; the sweep never aborts.
BenchReport run_bench(const BenchConfig& cfg);

/// avg/median/best node count, avg/median/best runtime (s) and average
/// suboptimality per (strategy, N), in first-seen order.
std::vector<AggregateRow> aggregate(const std::vector<RunRow>& runs);

double median(std::vector<double> values);

/// `with_time` = false blanks the wall-time column so outputs can be
/// compared byte for byte.
void write_runs_csv(std::ostream& os, const std::vector<RunRow>& runs,
                    bool with_time = true);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows,
                         bool with_time = true);

/// Shortest round-trip text for a double; "inf" / "-inf" / "nan" otherwise.
std::string format_double(double x);

}  // namespace tmiqp::bench

#endif  // TMIQP_BENCH_HPP
