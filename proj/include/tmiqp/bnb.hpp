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

#ifndef TMIQP_BNB_HPP
#define TMIQP_BNB_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tmiqp/model.hpp"
#include "tmiqp/qp.hpp"
#include "tmiqp/relaxation.hpp"

namespace tmiqp::bnb {

enum class Strategy { DepthFirst, BreadthFirst, Hybrid };

std::string to_string(Strategy s);

struct Node {
  int id = 0;
  std::optional<int> parent;
  PartialAssignment pa;
  int depth = 0;
  double base_weight = 0.0;
  double parent_objective = -kInf;  // J* of the parent; -inf for the root
  double weight = 0.0;              // cached effective weight
};

struct GuessSet {
  std::vector<PartialAssignment> guesses;
  std::vector<double> weights;

  std::size_t size() const { return guesses.size(); }
  bool empty() const { return guesses.empty(); }
  void add(PartialAssignment guess, double weight);
  /// Throws std::invalid_argument on unequal lengths or non-finite weights.
  void check() const;
};

struct BnbConfig {
  double eps_tol = 1e-6;
  Strategy strategy = Strategy::Hybrid;
  std::optional<long long> node_limit;
  std::optional<double> time_limit;  // seconds
  bool trace = false;
  double qp_tol = 1e-8;
  int qp_max_iter = 100;
};

enum class BnbStatus { Optimal, Suboptimal, Infeasible };

std::string to_string(BnbStatus s);

struct TraceRecord {
  int node_id = 0;
  int parent = -1;  // -1 for the root
  int depth = 0;
  double weight = 0.0;
  qp::QpStatus status = qp::QpStatus::Optimal;
  double objective = kInf;
  double U = kInf;
  double L = -kInf;
  double time = 0.0;  // seconds since start
};

/// One JSON object per line.
std::string to_json_line(const TraceRecord& r);

struct BnbStats {
  long long nodes_solved = 0;
  long long qp_iterations = 0;
  long long unsolved_nodes = 0;  // relaxations that hit the iteration limit
  double wall_time = 0.0;
};

struct BnbResult {
  BnbStatus status = BnbStatus::Infeasible;
  double J = kInf;
  double L = -kInf;
  double gap = kInf;  // U - L
  Trajectory traj;
  std::vector<IntVector> v_seq;
  BnbStats stats;
  std::vector<TraceRecord> trace;
};

/// Number of positions fixed in both `guess` and `node_pa` with equal values.
/// Throws std::invalid_argument on a length mismatch.
int guess_match_score(const PartialAssignment& guess, const PartialAssignment& node_pa);

/// w(n) + sum_i w0_i * score_i.
double effective_weight(const Node& node, const GuessSet& guesses);

/// Default-strategy weight w(n) of a node at `depth` whose parent has
/// objective `parent_objective`.
double base_weight(Strategy strategy, int depth, int N, double parent_objective,
                   bool have_incumbent);

/// Orders nodes by effective weight, then depth, then id (newer first).
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const;
};

/// Removes and returns a node maximizing the effective weight. Ties go to the
/// deeper node, then to the most recently created one. Throws
/// std::invalid_argument on an empty set.
Node select_node(std::vector<Node>& S, const GuessSet& guesses);

/// One child per integer vector at stage node.depth, created in lexicographic
/// order with ids from `next_id`. Throws std::invalid_argument at a leaf.
std::vector<Node> expand_node(const Node& node, const MiocpInstance& inst,
                              double node_objective, Strategy strategy,
                              bool have_incumbent, int& next_id);

/// min(U, min over the parents of S of their objective); U when S is empty.
double update_lower_bound(const std::vector<Node>& S, double U);

BnbResult solve_bnb(const MiocpInstance& inst, const GuessSet& guesses,
                    const BnbConfig& cfg,
                    const std::function<void(const TraceRecord&)>& on_trace = {});

}  // namespace tmiqp::bnb

#endif  // TMIQP_BNB_HPP
