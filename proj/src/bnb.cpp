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

#include "tmiqp/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "tmiqp/oracle.hpp"

namespace tmiqp::bnb {

namespace {

// Relaxations within this margin of the incumbent are not worth expanding.
constexpr double kPruneMargin = 1e-9;

}  // namespace

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::DepthFirst:
      return "depth-first";
    case Strategy::BreadthFirst:
      return "breadth-first";
    case Strategy::Hybrid:
      return "hybrid";
  }
  return "unknown";
}

std::string to_string(BnbStatus s) {
  switch (s) {
    case BnbStatus::Optimal:
      return "optimal";
    case BnbStatus::Suboptimal:
      return "suboptimal";
    case BnbStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

void GuessSet::add(PartialAssignment guess, double weight) {
  guesses.push_back(std::move(guess));
  weights.push_back(weight);
}

void GuessSet::check() const {
  if (guesses.size() != weights.size()) {
    throw std::invalid_argument("guess and weight lists differ in length");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) {
      throw std::invalid_argument("guess weight is not finite");
    }
  }
}

std::string to_json_line(const TraceRecord& r) {
  nlohmann::json j;
  j["node"] = r.node_id;
  j["parent"] = r.parent < 0 ? nlohmann::json(nullptr) : nlohmann::json(r.parent);
  j["depth"] = r.depth;
  j["weight"] = r.weight;
  j["status"] = qp::to_string(r.status);
  // JSON has no infinity; unbounded values become null.
  auto num = [](double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  j["J"] = num(r.objective);
  j["U"] = num(r.U);
  j["L"] = num(r.L);
  j["t"] = r.time;
  return j.dump();
}

int guess_match_score(const PartialAssignment& guess, const PartialAssignment& node_pa) {
  if (guess.horizon() != node_pa.horizon()) {
    throw std::invalid_argument("guess length " + std::to_string(guess.horizon()) +
                                " != node length " + std::to_string(node_pa.horizon()));
  }
  int score = 0;
  for (int k = 0; k < guess.horizon(); ++k) {
    if (!guess.is_fixed(k) || !node_pa.is_fixed(k)) {
      continue;
    }
    const IntVector& g = guess.value(k);
    const IntVector& n = node_pa.value(k);
    for (std::size_t j = 0; j < g.size() && j < n.size(); ++j) {
      score += g[j] == n[j] ? 1 : 0;
    }
  }
  return score;
}

double effective_weight(const Node& node, const GuessSet& guesses) {
  double w = node.base_weight;
  for (std::size_t i = 0; i < guesses.size(); ++i) {
    w += guesses.weights[i] * guess_match_score(guesses.guesses[i], node.pa);
  }
  return w;
}

double base_weight(Strategy strategy, int depth, int N, double parent_objective,
                   bool have_incumbent) {
  switch (strategy) {
    case Strategy::DepthFirst:
      return depth;
    case Strategy::BreadthFirst:
      return N - depth;
    case Strategy::Hybrid:
      if (!have_incumbent) {
        return depth;
      }
      return std::isfinite(parent_objective) ? -parent_objective : kInf;
  }
  return 0.0;
}

bool NodeOrder::operator()(const Node& a, const Node& b) const {
  if (a.weight != b.weight) {
    return a.weight > b.weight;
  }
  if (a.depth != b.depth) {
    return a.depth > b.depth;
  }
  return a.id > b.id;
}

Node select_node(std::vector<Node>& S, const GuessSet& guesses) {
  if (S.empty()) {
    throw std::invalid_argument("select_node on an empty candidate set");
  }
  std::size_t best = 0;
  Node best_node = S[0];
  best_node.weight = effective_weight(S[0], guesses);
  for (std::size_t i = 1; i < S.size(); ++i) {
    Node candidate = S[i];
    candidate.weight = effective_weight(candidate, guesses);
    if (NodeOrder{}(candidate, best_node)) {
      best = i;
      best_node = std::move(candidate);
    }
  }
  S.erase(S.begin() + static_cast<std::ptrdiff_t>(best));
  return best_node;
}

std::vector<Node> expand_node(const Node& node, const MiocpInstance& inst,
                              double node_objective, Strategy strategy,
                              bool have_incumbent, int& next_id) {
  if (node.depth >= inst.N) {
    throw std::invalid_argument("cannot expand a leaf node");
  }
  const std::vector<IntVector> choices = stage_vectors(inst.constraints);
  std::vector<Node> children;
  children.reserve(choices.size());
  for (const IntVector& value : choices) {
    Node child;
    child.id = next_id++;
    child.parent = node.id;
    child.pa = node.pa;
    child.pa.fix(node.depth, value);
    child.depth = node.depth + 1;
    child.parent_objective = node_objective;
    child.base_weight =
        base_weight(strategy, child.depth, inst.N, node_objective, have_incumbent);
    children.push_back(std::move(child));
  }
  return children;
}

double update_lower_bound(const std::vector<Node>& S, double U) {
  if (S.empty()) {
    return U;
  }
  double L = U;
  for (const Node& n : S) {
    L = std::min(L, n.parent_objective);
  }
  return L;
}

namespace {

class Solver {
 public:
  Solver(const MiocpInstance& inst, const GuessSet& guesses, const BnbConfig& cfg,
         const std::function<void(const TraceRecord&)>& on_trace)
      : inst_(inst), guesses_(guesses), cfg_(cfg), on_trace_(on_trace) {}

  BnbResult run() {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
    };

    Node root;
    root.pa = PartialAssignment::relaxed(inst_.N);
    root.base_weight = base_weight(cfg_.strategy, 0, inst_.N, -kInf, false);
    insert(std::move(root));
    next_id_ = 1;

    bool limit_hit = false;
    while (!S_.empty()) {
      if ((cfg_.node_limit && result_.stats.nodes_solved >= *cfg_.node_limit) ||
          (cfg_.time_limit && elapsed() >= *cfg_.time_limit)) {
        limit_hit = true;
        break;
      }
      // Step 2: argmax of the cached effective weights.
      Node node = pop();

      // Step 3.
      const RelaxedSolution sol =
          solve_qp(build_relaxation(inst_, node.pa), cfg_.qp_tol, cfg_.qp_max_iter,
                   !node.parent.has_value());
      ++result_.stats.nodes_solved;
      result_.stats.qp_iterations += sol.iterations;

      // Step 4.
      if (sol.status == qp::QpStatus::NonconvexRejected) {
        throw std::invalid_argument("relaxation is not convex");
      }
      if (sol.status == qp::QpStatus::IterationLimit) {
        // No bound from this node; children inherit the parent's bound.
        ++result_.stats.unsolved_nodes;
        spdlog::debug("node {} hit the QP iteration limit", node.id);
        if (node.depth < inst_.N) {
          expand(node, node.parent_objective);
        } else {
          lost_leaf_ = true;
        }
      } else if (sol.status == qp::QpStatus::Optimal &&
                 sol.objective < U_ - kPruneMargin) {
        if (is_integer_feasible(sol, inst_)) {
          accept(node, sol);
        } else {
          // The parent bound is also valid and keeps L monotone under
          // solver round-off.
          expand(node, std::max(sol.objective, node.parent_objective));
        }
      }

      // Step 5.
      // Candidates whose parents already exceed U cannot improve on it, so
      // the incumbent itself caps the bound.
      L_ = S_.empty() ? U_ : std::min(U_, *bounds_.begin());
      if (cfg_.trace || on_trace_) {
        TraceRecord r;
        r.node_id = node.id;
        r.parent = node.parent ? *node.parent : -1;
        r.depth = node.depth;
        r.weight = node.weight;
        r.status = sol.status;
        r.objective = sol.objective;
        r.U = U_;
        r.L = L_;
        r.time = elapsed();
        if (cfg_.trace) {
          result_.trace.push_back(r);
        }
        if (on_trace_) {
          on_trace_(r);
        }
      }
      if (U_ - L_ <= cfg_.eps_tol) {
        break;
      }
    }

    result_.stats.wall_time = elapsed();
    result_.J = U_;
    result_.L = S_.empty() && !limit_hit ? U_ : L_;
    result_.gap = U_ - result_.L;
    const bool closed = !limit_hit && !lost_leaf_ && result_.stats.unsolved_nodes == 0;
    if (closed && std::isfinite(U_)) {
      result_.status = BnbStatus::Optimal;
    } else if (closed) {
      result_.status = BnbStatus::Infeasible;
    } else {
      result_.status = BnbStatus::Suboptimal;
    }
    return std::move(result_);
  }

 private:
  void insert(Node node) {
    node.weight = effective_weight(node, guesses_);
    bounds_.insert(node.parent_objective);
    S_.insert(std::move(node));
  }

  Node pop() {
    auto it = S_.begin();
    Node node = *it;
    S_.erase(it);
    bounds_.erase(bounds_.find(node.parent_objective));
    return node;
  }

  void expand(const Node& node, double objective) {
    for (Node& child : expand_node(node, inst_, objective, cfg_.strategy,
                                   std::isfinite(U_), next_id_)) {
      insert(std::move(child));
    }
  }

  void accept(const Node& node, const RelaxedSolution& sol) {
    double J = sol.objective;
    Trajectory traj = sol.traj;
    std::vector<IntVector> v = rounded_integers(sol, inst_);
    if (node.depth < inst_.N) {
      // Integral before every stage is fixed: re-solve with the rounded
      // sequence so the incumbent is an exact integer solution.
      const RelaxedSolution exact = solve_qp(
          build_relaxation(inst_, PartialAssignment::full(v)), cfg_.qp_tol,
          cfg_.qp_max_iter, false);
      result_.stats.qp_iterations += exact.iterations;
      if (exact.status != qp::QpStatus::Optimal) {
        expand(node, std::max(sol.objective, node.parent_objective));
        return;
      }
      J = exact.objective;
      traj = exact.traj;
    }
    if (J >= U_) {
      return;
    }
    const bool first = !std::isfinite(U_);
    U_ = J;
    result_.traj = std::move(traj);
    result_.v_seq = std::move(v);
    spdlog::debug("incumbent {} at node {}", U_, node.id);
    if (first && cfg_.strategy == Strategy::Hybrid) {
      // Switch from depth-first to best-bound.
      std::set<Node, NodeOrder> rebuilt;
      for (Node n : S_) {
        n.base_weight =
            base_weight(cfg_.strategy, n.depth, inst_.N, n.parent_objective, true);
        n.weight = effective_weight(n, guesses_);
        rebuilt.insert(std::move(n));
      }
      S_ = std::move(rebuilt);
    }
  }

  const MiocpInstance& inst_;
  const GuessSet& guesses_;
  const BnbConfig& cfg_;
  const std::function<void(const TraceRecord&)>& on_trace_;

  std::set<Node, NodeOrder> S_;
  std::multiset<double> bounds_;  // parent objectives of S
  double U_ = kInf;
  double L_ = -kInf;
  int next_id_ = 0;
  bool lost_leaf_ = false;
  BnbResult result_;
};

}  // namespace

BnbResult solve_bnb(const MiocpInstance& inst, const GuessSet& guesses,
                    const BnbConfig& cfg,
                    const std::function<void(const TraceRecord&)>& on_trace) {
  if (!(cfg.eps_tol > 0.0)) {
    throw std::invalid_argument("eps_tol must be positive");
  }
  guesses.check();
  for (const auto& g : guesses.guesses) {
    check_assignment(inst, g);
  }
  return Solver(inst, guesses, cfg, on_trace).run();
}

}  // namespace tmiqp::bnb
