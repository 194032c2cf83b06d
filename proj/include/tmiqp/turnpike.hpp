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

#ifndef TMIQP_TURNPIKE_HPP
#define TMIQP_TURNPIKE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "tmiqp/bnb.hpp"
#include "tmiqp/model.hpp"

namespace tmiqp {

class SteadyStateInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SteadyState {
  Vector x_bar;
  Vector u_bar;
  IntVector v_bar;
  double cost = kInf;

  /// (x_bar, u_bar, v_bar) stacked.
  Vector stacked() const;
};

/// Globally solves min l(x, u, v) s.t. x = Ax + B1 u + B2 v + c and the stage
/// constraints, by enumerating every integer vector and solving the convex
/// QP in (x, u). Uses the stage-0 cost. Ties within 1e-9 go to the
/// lexicographically smallest v. Throws SteadyStateInfeasible when no vector
/// admits a steady state and std::length_error beyond `limit` vectors.
SteadyState solve_steady_state(const MiocpInstance& inst, long long limit = 1000000);

/// {k in 0..N-1 : ||z(k) - z_bar||_inf <= eps} with z = (x, u, v).
std::vector<int> compute_Q_eps(const Trajectory& traj, const SteadyState& z_bar,
                               double eps);

/// First and last index of the longest contiguous run in a sorted index set;
/// (-1, -1) when empty. The earliest run wins ties.
std::pair<int, int> longest_run(const std::vector<int>& indices);

/// True iff round(v(k)) == v_bar for every k in Q_eps. Throws
/// std::invalid_argument unless 0 < eps < 1.
bool check_integer_turnpike(const Trajectory& traj, const SteadyState& z_bar,
                            double eps);

struct TurnpikeCell {
  int x0_id = 0;
  int N = 0;
  double eps = 0.0;
  int out_count = 0;
  int entry_end = -1;
  int leave_start = -1;
  std::string status;  // solver status of the (x0, N) solve
};

struct TurnpikeRun {
  int x0_id = 0;
  int N = 0;
  std::string status;
  double J = kInf;
  Trajectory traj;
};

struct TurnpikeReport {
  SteadyState z_bar;
  std::vector<TurnpikeCell> cells;
  std::vector<TurnpikeRun> runs;
  double C_fit = 0.0;
};

/// max over cells of out_count * eps^2; 0 without cells.
double fit_C(const std::vector<TurnpikeCell>& cells);

/// Solves every (x0, N) with branch and bound and tabulates Q_eps over the
/// grid. Failed solves are kept as cells with the failing status and no
/// counts; they do not enter C_fit.
TurnpikeReport turnpike_profile(const MiocpInstance& inst,
                                const std::vector<Vector>& x0_list,
                                const std::vector<int>& N_list,
                                const std::vector<double>& eps_grid,
                                const bnb::BnbConfig& cfg = {}, int jobs = 1);

}  // namespace tmiqp

#endif  // TMIQP_TURNPIKE_HPP
