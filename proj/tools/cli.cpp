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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "tmiqp/bench.hpp"
#include "tmiqp/bnb.hpp"
#include "tmiqp/builtin.hpp"
#include "tmiqp/dissipativity.hpp"
#include "tmiqp/guessgen.hpp"
#include "tmiqp/io.hpp"
#include "tmiqp/turnpike.hpp"

namespace tmiqp::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct InstanceArgs {
  std::string instance;
  std::string builtin;
  std::optional<int> N;
  int nx = 3;
};

struct SolverArgs {
  std::string guesses;
  std::string recipe;
  std::string strategy = "std";
  double eps_tol = 1e-6;
  std::optional<long long> node_limit;
  double time_limit = 60.0;
  bool trace = false;
};

void add_instance_options(CLI::App& app, InstanceArgs& a) {
  auto* inst = app.add_option("--instance", a.instance, "Instance JSON file");
  auto* builtin = app.add_option("--builtin", a.builtin, "Builtin instance name");
  inst->excludes(builtin);
  app.add_option("--N", a.N, "Horizon override");
  app.add_option("--nx", a.nx, "State dimension of example2")->check(CLI::PositiveNumber);
}

void add_solver_options(CLI::App& app, SolverArgs& a) {
  auto* guesses = app.add_option("--guesses", a.guesses, "Guess JSON file");
  auto* recipe = app.add_option("--recipe", a.recipe, "Guess recipe: table1 or tail:K[,K...]");
  guesses->excludes(recipe);
  app.add_option("--strategy", a.strategy, "std or weighted")
      ->check(CLI::IsMember({"std", "weighted"}));
  app.add_option("--eps-tol", a.eps_tol, "Termination gap")->check(CLI::NonNegativeNumber);
  app.add_option("--node-limit", a.node_limit, "Maximum number of solved nodes");
  app.add_option("--time-limit", a.time_limit, "Wall-time limit in seconds");
  app.add_flag("--trace", a.trace, "Record one JSON line per processed node");
}

bnb::BnbConfig bnb_config(const SolverArgs& a) {
  bnb::BnbConfig cfg;
  cfg.eps_tol = a.eps_tol;
  cfg.node_limit = a.node_limit;
  cfg.time_limit = a.time_limit;
  cfg.trace = a.trace;
  return cfg;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("bad number '" + item + "' in '" + text + "'");
    }
    values.push_back(v);
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Scalars broadcast to every state.
Vector state_from(const std::string& text, int nx) {
  Vector v = parse_vector(text);
  if (v.size() == 1 && nx > 1) {
    return Vector::Constant(nx, v(0));
  }
  if (v.size() != nx) {
    throw std::invalid_argument("x0 '" + text + "' has " + std::to_string(v.size()) +
                                " entries, expected " + std::to_string(nx));
  }
  return v;
}

io::InstanceFile load(const InstanceArgs& a) {
  io::InstanceFile f;
  if (!a.instance.empty()) {
    f = io::load_instance(a.instance);
  } else if (!a.builtin.empty()) {
    f.instance = builtin::by_name(a.builtin, a.N.value_or(a.builtin == "illustrative" ? 30 : 20),
                                  a.nx);
  } else {
    throw std::invalid_argument("one of --instance or --builtin is required");
  }
  if (a.N) {
    f.instance = with_horizon(f.instance, *a.N);
  }
  return f;
}

bnb::GuessSet solver_guesses(const SolverArgs& a, const io::InstanceFile& f) {
  const MiocpInstance& inst = f.instance;
  if (!a.guesses.empty()) {
    return io::load_guesses(a.guesses, inst.N);
  }
  if (a.strategy == "std") {
    return {};
  }
  if (a.recipe.empty()) {
    if (f.guesses) return *f.guesses;
    throw std::invalid_argument("--strategy weighted needs --guesses, --recipe or guesses in the instance");
  }
  const auto spec = bench::make_strategy("weighted", a.recipe);
  if (spec.recipe == bench::Recipe::Table1) {
    return guessgen::plateau_guesses(IntVector{0}, inst.N, guessgen::table1_templates());
  }
  const IntVector v_bar = solve_steady_state(inst).v_bar;
  const double w =
      guessgen::dominant_weight({guessgen::max_base_weight(bnb::Strategy::Hybrid, inst.N)});
  bnb::GuessSet out;
  for (auto& g : guessgen::tail_guesses(v_bar, inst.N, spec.k_hat)) out.add(std::move(g), w);
  return out;
}

std::vector<int> int_list(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const auto& s : items) {
    for (double v : parse_vector(s)) out.push_back(static_cast<int>(v));
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot write " + path.string());
  }
  os << content;
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << "k";
  for (Eigen::Index i = 0; i < t.x.cols(); ++i) os << ",x" << i;
  for (Eigen::Index i = 0; i < t.u.cols(); ++i) os << ",u" << i;
  for (Eigen::Index i = 0; i < t.v.cols(); ++i) os << ",v" << i;
  os << '\n';
  for (Eigen::Index k = 0; k < t.x.rows(); ++k) {
    os << k;
    for (Eigen::Index i = 0; i < t.x.cols(); ++i) os << ',' << bench::format_double(t.x(k, i));
    const bool last = k >= t.u.rows();
    for (Eigen::Index i = 0; i < t.u.cols(); ++i)
      os << ',' << (last ? "" : bench::format_double(t.u(k, i)));
    for (Eigen::Index i = 0; i < t.v.cols(); ++i)
      os << ',' << (last ? "" : bench::format_double(t.v(k, i)));
    os << '\n';
  }
  return os.str();
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

int cmd_solve(const InstanceArgs& ia, const SolverArgs& sa, const std::vector<std::string>& x0,
              const std::string& out_dir, std::ostream& out, std::ostream& err) {
  io::InstanceFile f = load(ia);
  if (!x0.empty()) {
    f.instance = with_initial_state(f.instance, state_from(x0.front(), f.instance.nx()));
  }
  const auto guesses = solver_guesses(sa, f);
  std::unique_ptr<std::ofstream> trace_file;
  std::ostream* trace_os = &err;
  if (sa.trace && !out_dir.empty()) {
    fs::create_directories(out_dir);
    trace_file = std::make_unique<std::ofstream>(fs::path(out_dir) / "trace.jsonl");
    trace_os = trace_file.get();
  }
  std::function<void(const bnb::TraceRecord&)> on_trace;
  if (sa.trace) {
    on_trace = [trace_os](const bnb::TraceRecord& r) { *trace_os << bnb::to_json_line(r) << '\n'; };
  }
  const auto result = bnb::solve_bnb(f.instance, guesses, bnb_config(sa), on_trace);

  Json j;
  j["status"] = bnb::to_string(result.status);
  j["J"] = number(result.J);
  j["L"] = number(result.L);
  j["gap"] = number(result.gap);
  j["nodes"] = result.stats.nodes_solved;
  j["qp_iterations"] = result.stats.qp_iterations;
  j["time"] = result.stats.wall_time;
  j["trajectory"] = !std::isfinite(result.J)
                        ? Json(nullptr)
                        : io::trajectory_to_json(result.traj);
  out << j.dump() << '\n';
  switch (result.status) {
    case bnb::BnbStatus::Optimal:
      return kOk;
    case bnb::BnbStatus::Suboptimal:
      return kSuboptimal;
    case bnb::BnbStatus::Infeasible:
      return kInfeasible;
  }
  return kError;
}

struct BenchArgs {
  std::vector<int> N_list;
  std::vector<std::string> x0;
  std::string linspace;
  double noise = 0.0;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> strategies;
  int jobs = 1;
  std::string out_dir = ".";
};

int cmd_bench(const InstanceArgs& ia, const SolverArgs& sa, const BenchArgs& ba,
              std::ostream& out) {
  bench::BenchConfig cfg;
  cfg.instance = load(ia).instance;
  cfg.N_list = ba.N_list.empty() ? std::vector<int>{cfg.instance.N} : ba.N_list;
  for (const auto& s : ba.x0) cfg.x0.list.push_back(state_from(s, cfg.instance.nx()));
  if (!ba.linspace.empty()) {
    const Vector v = parse_vector(ba.linspace);
    if (v.size() != 3) throw std::invalid_argument("--linspace expects lo,hi,count");
    cfg.x0.linspace = true;
    cfg.x0.lo = v(0);
    cfg.x0.hi = v(1);
    cfg.x0.count = static_cast<int>(v(2));
  }
  cfg.x0.noise = ba.noise;
  cfg.x0.seed = ba.seed;
  const std::vector<std::string> names =
      ba.strategies.empty() ? std::vector<std::string>{"std", "weighted"} : ba.strategies;
  for (const auto& name : names) {
    cfg.strategies.push_back(
        bench::make_strategy(name, sa.recipe.empty() ? "tail:2,3,4,5,6" : sa.recipe));
  }
  cfg.bnb = bnb_config(sa);
  cfg.bnb.trace = false;
  cfg.jobs = ba.jobs;

  const auto report = bench::run_bench(cfg);
  fs::create_directories(ba.out_dir);
  std::ostringstream runs, agg;
  bench::write_runs_csv(runs, report.runs);
  bench::write_aggregate_csv(agg, report.aggregate);
  write_file(fs::path(ba.out_dir) / "runs.csv", runs.str());
  write_file(fs::path(ba.out_dir) / "aggregate.csv", agg.str());
  out << agg.str();
  return kOk;
}

struct TurnpikeArgs {
  std::vector<std::string> x0;
  std::vector<int> N_list;
  std::vector<double> eps{0.1};
  int jobs = 1;
  std::string out_dir = ".";
};

int cmd_turnpike(const InstanceArgs& ia, const SolverArgs& sa, const TurnpikeArgs& ta,
                 std::ostream& out) {
  const MiocpInstance inst = load(ia).instance;
  std::vector<Vector> x0_list;
  for (const auto& s : ta.x0) x0_list.push_back(state_from(s, inst.nx()));
  if (x0_list.empty()) x0_list.push_back(inst.x0);
  const std::vector<int> N_list = ta.N_list.empty() ? std::vector<int>{inst.N} : ta.N_list;
  auto cfg = bnb_config(sa);
  cfg.trace = false;
  const auto report = turnpike_profile(inst, x0_list, N_list, ta.eps, cfg, ta.jobs);

  const fs::path dir(ta.out_dir);
  fs::create_directories(dir);
  std::ostringstream csv;
  csv << "x0_id,N,eps,out_count,entry_end,leave_start,status\n";
  for (const auto& c : report.cells) {
    csv << c.x0_id << ',' << c.N << ',' << bench::format_double(c.eps) << ',' << c.out_count
        << ',' << c.entry_end << ',' << c.leave_start << ',' << c.status << '\n';
  }
  write_file(dir / "turnpike.csv", csv.str());

  Json header;
  header["z_bar"] = {{"x", std::vector<double>(report.z_bar.x_bar.data(),
                                              report.z_bar.x_bar.data() + report.z_bar.x_bar.size())},
                     {"u", std::vector<double>(report.z_bar.u_bar.data(),
                                              report.z_bar.u_bar.data() + report.z_bar.u_bar.size())},
                     {"v", report.z_bar.v_bar},
                     {"cost", report.z_bar.cost}};
  header["C_fit"] = report.C_fit;
  header["eps"] = ta.eps;
  header["N"] = N_list;
  Json trajectories = Json::array();
  for (const auto& r : report.runs) {
    const std::string name =
        "trajectory_x" + std::to_string(r.x0_id) + "_N" + std::to_string(r.N) + ".csv";
    if (r.traj.x.size() > 0) {
      write_file(dir / name, trajectory_csv(r.traj));
      trajectories.push_back({{"x0_id", r.x0_id}, {"N", r.N}, {"status", r.status},
                              {"J", number(r.J)}, {"file", name}});
    } else {
      trajectories.push_back({{"x0_id", r.x0_id}, {"N", r.N}, {"status", r.status},
                              {"J", nullptr}, {"file", nullptr}});
    }
  }
  header["runs"] = trajectories;
  write_file(dir / "turnpike.json", header.dump(2) + "\n");
  out << header.dump(2) << '\n';
  return kOk;
}

int cmd_certify(const InstanceArgs& ia, std::ostream& out) {
  const MiocpInstance inst = load(ia).instance;
  const auto cert = certify(inst);
  Json P = Json::array();
  for (Eigen::Index r = 0; r < cert.P.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < cert.P.cols(); ++c) row.push_back(number(cert.P(r, c)));
    P.push_back(row);
  }
  Json j;
  j["status"] = to_string(cert.status);
  j["eps"] = cert.eps;
  j["residual_min_eig"] = number(cert.residual_min_eig);
  j["P"] = P;
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_instances(const InstanceArgs& ia, const std::string& out_dir, std::ostream& out) {
  for (const auto& name : builtin::names()) {
    out << name << '\n';
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      InstanceArgs a = ia;
      a.instance.clear();
      a.builtin = name;
      write_file(fs::path(out_dir) / (name + ".json"), io::instance_to_json(load(a).instance).dump(2) + "\n");
    }
  }
  return kOk;
}

void configure_logging() {
  const char* level = std::getenv("TMIQP_LOG");
  const std::string s = level ? level : "error";
  if (s == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (s == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    spdlog::set_level(spdlog::level::err);
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();
  CLI::App app{"Branch and bound for linear-quadratic mixed-integer optimal control"};
  app.require_subcommand(1);

  InstanceArgs ia;
  SolverArgs sa;
  std::vector<std::string> x0;
  std::string out_dir;
  BenchArgs ba;
  TurnpikeArgs ta;
  std::vector<std::string> N_items;

  auto* solve = app.add_subcommand("solve", "Solve one instance, print the solution JSON");
  add_instance_options(*solve, ia);
  add_solver_options(*solve, sa);
  solve->add_option("--x0", x0, "Initial state, comma separated");
  solve->add_option("--out", out_dir, "Directory for the trace file");

  auto* bench_cmd = app.add_subcommand("bench", "Compare strategies over an x0 and N sweep");
  add_instance_options(*bench_cmd, ia);
  add_solver_options(*bench_cmd, sa);
  bench_cmd->add_option("--N-list", N_items, "Horizons, comma separated");
  bench_cmd->add_option("--x0", ba.x0, "Initial state (repeatable)");
  bench_cmd->add_option("--linspace", ba.linspace, "lo,hi,count: x0 = c * ones");
  bench_cmd->add_option("--noise", ba.noise, "Uniform noise amplitude added to linspace states");
  bench_cmd->add_option("--seed", ba.seed, "Noise seed");
  bench_cmd->add_option("--strategies", ba.strategies, "std and/or weighted (default both)");
  bench_cmd->add_option("--jobs", ba.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", ba.out_dir, "Output directory");

  auto* turnpike = app.add_subcommand("turnpike", "Tabulate Q_eps over x0, N and eps");
  add_instance_options(*turnpike, ia);
  add_solver_options(*turnpike, sa);
  turnpike->add_option("--x0", ta.x0, "Initial state (repeatable)");
  turnpike->add_option("--N-list", N_items, "Horizons, comma separated");
  turnpike->add_option("--eps", ta.eps, "Neighbourhood radii (repeatable)");
  turnpike->add_option("--jobs", ta.jobs, "Concurrent solves")->check(CLI::PositiveNumber);
  turnpike->add_option("--out", ta.out_dir, "Output directory");

  auto* certify_cmd = app.add_subcommand("certify", "Print a dissipativity certificate");
  add_instance_options(*certify_cmd, ia);

  auto* instances = app.add_subcommand("instances", "List builtin instances");
  instances->add_option("--out", out_dir, "Write each builtin as JSON into this directory");
  instances->add_option("--nx", ia.nx, "State dimension of example2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kError;
  }

  try {
    if (solve->parsed()) {
      return cmd_solve(ia, sa, x0, out_dir, out, err);
    }
    if (bench_cmd->parsed()) {
      ba.N_list = int_list(N_items);
      return cmd_bench(ia, sa, ba, out);
    }
    if (turnpike->parsed()) {
      ta.N_list = int_list(N_items);
      return cmd_turnpike(ia, sa, ta, out);
    }
    if (certify_cmd->parsed()) {
      return cmd_certify(ia, out);
    }
    return cmd_instances(ia, out_dir, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace tmiqp::cli
