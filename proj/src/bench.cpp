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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "tmiqp/guessgen.hpp"
#include "tmiqp/oracle.hpp"
#include "tmiqp/parallel.hpp"
#include "tmiqp/turnpike.hpp"

namespace tmiqp::bench {

namespace {

struct Cell {
  std::size_t strategy = 0;
  std::string guess;
  std::optional<int> k_hat;
  int x0_id = 0;
  int N = 0;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw std::invalid_argument("bad integer '" + item + "' in list '" + text + "'");
    }
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

bnb::GuessSet guesses_for(const StrategySpec& spec, const Cell& cell,
                          const MiocpInstance& inst, const std::optional<IntVector>& v_bar,
                          bnb::Strategy strategy) {
  bnb::GuessSet out;
  switch (spec.recipe) {
    case Recipe::None:
      break;
    case Recipe::Table1:
      if (inst.nv() != 1) {
        throw std::invalid_argument("the table1 recipe needs a single integer channel");
      }
      // The published table lists its patterns around a zero plateau.
      out = guessgen::plateau_guesses(IntVector{0}, cell.N, guessgen::table1_templates());
      break;
    case Recipe::Tail: {
      const double w = guessgen::dominant_weight({guessgen::max_base_weight(strategy, cell.N)});
      auto tails = guessgen::tail_guesses(*v_bar, cell.N, {*cell.k_hat});
      out.add(std::move(tails.front()), w);
      break;
    }
  }
  return out;
}

std::string status_name(bnb::BnbStatus s) { return bnb::to_string(s); }

}  // namespace

std::vector<Vector> expand(const X0Sweep& sweep, int nx) {
  if (sweep.noise != 0.0 && !sweep.seed) {
    throw std::invalid_argument("x0 noise requires a seed");
  }
  std::vector<Vector> out;
  for (const auto& x0 : sweep.list) {
    if (x0.size() != nx) {
      throw std::invalid_argument("x0 of dimension " + std::to_string(x0.size()) +
                                  ", expected " + std::to_string(nx));
    }
    out.push_back(x0);
  }
  if (sweep.linspace) {
    std::mt19937_64 rng(sweep.seed.value_or(0));
    std::uniform_real_distribution<double> noise(-sweep.noise, sweep.noise);
    for (int i = 0; i < sweep.count; ++i) {
      const double c = sweep.count == 1
                           ? sweep.lo
                           : sweep.lo + (sweep.hi - sweep.lo) * i / (sweep.count - 1);
      Vector x0 = Vector::Constant(nx, c);
      if (sweep.noise != 0.0) {
        for (int j = 0; j < nx; ++j) x0(j) += noise(rng);
      }
      out.push_back(std::move(x0));
    }
  }
  return out;
}

StrategySpec make_strategy(const std::string& strategy, const std::string& recipe) {
  StrategySpec spec;
  spec.label = strategy;
  if (strategy == "std") {
    return spec;
  }
  if (strategy != "weighted") {
    throw std::invalid_argument("unknown strategy '" + strategy + "' (std, weighted)");
  }
  spec.weighted = true;
  if (recipe == "table1") {
    spec.recipe = Recipe::Table1;
  } else if (recipe.rfind("tail:", 0) == 0) {
    spec.recipe = Recipe::Tail;
    spec.k_hat = parse_int_list(recipe.substr(5));
    if (spec.k_hat.empty()) {
      throw std::invalid_argument("tail recipe without k_hat values");
    }
  } else {
    throw std::invalid_argument("unknown recipe '" + recipe + "' (table1, tail:K[,K...])");
  }
  return spec;
}

BenchReport run_bench(const BenchConfig& cfg) {
  const auto x0_list = expand(cfg.x0, cfg.instance.nx());

  std::optional<IntVector> v_bar;
  for (const auto& s : cfg.strategies) {
    if (s.recipe == Recipe::Tail && !v_bar) {
      v_bar = solve_steady_state(cfg.instance).v_bar;
    }
  }

  std::vector<Cell> cells;
  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    const auto& spec = cfg.strategies[s];
    std::vector<std::pair<std::string, std::optional<int>>> guesses;
    switch (spec.recipe) {
      case Recipe::None:
        guesses.emplace_back("-", std::nullopt);
        break;
      case Recipe::Table1:
        guesses.emplace_back("table1", std::nullopt);
        break;
      case Recipe::Tail:
        for (int k : spec.k_hat) guesses.emplace_back("k=" + std::to_string(k), k);
        break;
    }
    for (int N : cfg.N_list) {
      for (const auto& [name, k] : guesses) {
        for (std::size_t i = 0; i < x0_list.size(); ++i) {
          cells.push_back({s, name, k, static_cast<int>(i), N});
        }
      }
    }
  }

  std::vector<RunRow> rows(cells.size());
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t c) {
    const Cell& cell = cells[c];
    const auto& spec = cfg.strategies[cell.strategy];
    RunRow& row = rows[c];
    row.strategy = spec.label;
    row.guess = cell.guess;
    row.x0_id = cell.x0_id;
    row.N = cell.N;
    try {
      const MiocpInstance inst =
          with_initial_state(with_horizon(cfg.instance, cell.N), x0_list[cell.x0_id]);
      const auto guesses = guesses_for(spec, cell, inst, v_bar, cfg.bnb.strategy);
      const auto result = bnb::solve_bnb(inst, guesses, cfg.bnb);
      row.status = status_name(result.status);
      row.nodes = result.stats.nodes_solved;
      row.qp_iters = result.stats.qp_iterations;
      row.wall_ms = 1e3 * result.stats.wall_time;
      row.J = result.J;
      row.gap = result.gap;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
  });

  // Reference objective per (x0, N): the oracle where enumeration is cheap,
  // otherwise the best J any strategy found.
  std::map<std::pair<int, int>, std::pair<double, std::string>> reference;
  for (int N : cfg.N_list) {
    for (std::size_t i = 0; i < x0_list.size(); ++i) {
      const auto key = std::make_pair(static_cast<int>(i), N);
      if (reference.count(key)) continue;
      const MiocpInstance inst = with_initial_state(with_horizon(cfg.instance, N), x0_list[i]);
      if (sequence_count(inst, cfg.oracle_limit) <= cfg.oracle_limit) {
        try {
          const auto oracle = enumerate_solve(inst, cfg.oracle_limit);
          reference[key] = {oracle.J, "oracle"};
          continue;
        } catch (const std::exception&) {
          // fall back to the best-known value
        }
      }
      double best = kInf;
      for (const auto& row : rows) {
        if (row.x0_id == key.first && row.N == key.second && std::isfinite(row.J)) {
          best = std::min(best, row.J);
        }
      }
      reference[key] = {best, std::isfinite(best) ? "best" : "none"};
    }
  }
  for (auto& row : rows) {
    const auto& [ref, source] = reference[{row.x0_id, row.N}];
    row.reference = source;
    if (std::isfinite(ref) && std::isfinite(row.J)) {
      row.subopt = std::max(0.0, row.J - ref);
    } else if (!std::isfinite(ref) && !std::isfinite(row.J) && source == "oracle") {
      row.subopt = 0.0;  // both agree the cell is infeasible
    }
  }

  BenchReport report;
  report.aggregate = aggregate(rows);
  report.runs = std::move(rows);
  return report;
}

double median(std::vector<double> values) {
  if (values.empty()) {
    return std::nan("");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& runs) {
  std::vector<std::pair<std::string, int>> order;
  std::map<std::pair<std::string, int>, std::vector<const RunRow*>> groups;
  for (const auto& row : runs) {
    const auto key = std::make_pair(row.strategy, row.N);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&row);
  }
  std::vector<AggregateRow> out;
  for (const auto& key : order) {
    std::vector<double> nodes, seconds, subopt;
    for (const RunRow* r : groups[key]) {
      nodes.push_back(static_cast<double>(r->nodes));
      seconds.push_back(1e-3 * r->wall_ms);
      subopt.push_back(r->subopt);
    }
    auto mean = [](const std::vector<double>& v) {
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };
    auto add = [&](const char* metric, double value) {
      out.push_back({key.first, key.second, metric, value});
    };
    add("avg_nodes", mean(nodes));
    add("median_nodes", median(nodes));
    add("avg_runtime_s", mean(seconds));
    add("median_runtime_s", median(seconds));
    add("best_nodes", *std::min_element(nodes.begin(), nodes.end()));
    add("best_runtime_s", *std::min_element(seconds.begin(), seconds.end()));
    add("avg_subopt", mean(subopt));
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

namespace {

// Status strings may carry exception messages.
std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

}  // namespace

void write_runs_csv(std::ostream& os, const std::vector<RunRow>& runs, bool with_time) {
  os << "# subopt = J - J_ref, J_ref from exhaustive enumeration when the instance has at "
        "most 4096 integer sequences (reference=oracle), otherwise the best J of any "
        "strategy in the sweep (reference=best)\n";
  os << "strategy,guess,x0_id,N,status,nodes,qp_iters,wall_ms,J,gap,subopt,reference\n";
  for (const auto& r : runs) {
    os << r.strategy << ',' << r.guess << ',' << r.x0_id << ',' << r.N << ','
       << quoted(r.status) << ',' << r.nodes << ',' << r.qp_iters << ','
       << (with_time ? format_double(r.wall_ms) : "") << ',' << format_double(r.J) << ','
       << format_double(r.gap) << ',' << format_double(r.subopt) << ',' << r.reference
       << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows,
                         bool with_time) {
  os << "strategy,N,metric,value\n";
  for (const auto& r : rows) {
    const bool is_time = r.metric.find("runtime") != std::string::npos;
    os << r.strategy << ',' << r.N << ',' << r.metric << ','
       << (is_time && !with_time ? "" : format_double(r.value)) << '\n';
  }
}

}  // namespace tmiqp::bench
