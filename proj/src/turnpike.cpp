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

#include "tmiqp/turnpike.hpp"

#include <cmath>

#include "tmiqp/oracle.hpp"
#include "tmiqp/parallel.hpp"
#include "tmiqp/qp.hpp"

namespace tmiqp {

namespace {

Vector to_vector(const IntVector& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v[i];
  }
  return out;
}

// Rows C z <= d for lo <= g'z + offset <= hi, skipping infinite sides.
void add_range(std::vector<Vector>& rows, std::vector<double>& rhs, const Vector& g,
               double offset, double lo, double hi) {
  if (std::isfinite(hi)) {
    rows.push_back(g);
    rhs.push_back(hi - offset);
  }
  if (std::isfinite(lo)) {
    rows.push_back(-g);
    rhs.push_back(offset - lo);
  }
}

}  // namespace

Vector SteadyState::stacked() const {
  Vector z(x_bar.size() + u_bar.size() + static_cast<Eigen::Index>(v_bar.size()));
  z << x_bar, u_bar, to_vector(v_bar);
  return z;
}

SteadyState solve_steady_state(const MiocpInstance& inst, long long limit) {
  if (inst.stage_cardinality() > limit) {
    throw std::length_error("too many integer vectors for steady-state enumeration");
  }
  const int nx = inst.nx();
  const int nu = inst.nu();
  const int nv = inst.nv();
  const int n = nx + nu;
  const StageCost& cost = inst.stage_costs.front();
  const auto& cs = inst.constraints;
  const Vector c = inst.dyn.c.size() == nx ? inst.dyn.c : Vector::Zero(nx);

  const Matrix Ruu = cost.R.topLeftCorner(nu, nu);
  const Matrix Ruv = cost.R.topRightCorner(nu, nv);
  const Matrix Rvv = cost.R.bottomRightCorner(nv, nv);

  SteadyState best;
  bool found = false;
  for (const IntVector& v : stage_vectors(cs)) {
    const Vector vf = to_vector(v);
    qp::DenseQp problem;
    problem.H = Matrix::Zero(n, n);
    problem.H.topLeftCorner(nx, nx) = 2.0 * cost.Q;
    problem.H.bottomRightCorner(nu, nu) = 2.0 * Ruu;
    problem.h_.resize(n);
    problem.h_ << cost.q, cost.r.head(nu) + 2.0 * Ruv * vf;
    problem.constant_ = vf.dot(Rvv * vf) + cost.r.tail(nv).dot(vf) + cost.constant;

    // (I - A) x - B1 u = B2 v + c
    problem.E.resize(nx, n);
    problem.E << Matrix::Identity(nx, nx) - inst.dyn.A, -inst.dyn.B1;
    problem.e_ = inst.dyn.B2 * vf + c;

    std::vector<Vector> rows;
    std::vector<double> rhs;
    for (int i = 0; i < n; ++i) {
      const Vector e = Vector::Unit(n, i);
      if (i < nx) {
        add_range(rows, rhs, e, 0.0, cs.x_lo(i), cs.x_hi(i));
      } else {
        add_range(rows, rhs, e, 0.0, cs.u_lo(i - nx), cs.u_hi(i - nx));
      }
    }
    bool violated = false;
    for (const auto& row : cs.mixed) {
      Vector g(n);
      g << row.gx, row.gu;
      const double offset = row.gv.dot(vf);
      if (g.cwiseAbs().maxCoeff() == 0.0) {
        violated |= offset < row.lo - 1e-9 || offset > row.hi + 1e-9;
        continue;
      }
      add_range(rows, rhs, g, offset, row.lo, row.hi);
    }
    if (violated) {
      continue;
    }
    problem.C.resize(static_cast<Eigen::Index>(rows.size()), n);
    problem.d_.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      problem.C.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      problem.d_(static_cast<Eigen::Index>(i)) = rhs[i];
    }

    qp::IpmSettings settings;
    settings.tol = 1e-10;
    settings.max_iter = 200;
    const qp::QpSolution sol = qp::solve(problem, settings);
    if (sol.status != qp::QpStatus::Optimal || sol.objective >= best.cost - 1e-9) {
      continue;
    }
    found = true;
    best.x_bar = sol.z.head(nx);
    best.u_bar = sol.z.tail(nu);
    best.v_bar = v;
    best.cost = sol.objective;
  }
  if (!found) {
    throw SteadyStateInfeasible("no integer vector admits a feasible steady state");
  }
  return best;
}

std::vector<int> compute_Q_eps(const Trajectory& traj, const SteadyState& z_bar,
                               double eps) {
  const Vector zb = z_bar.stacked();
  std::vector<int> out;
  for (int k = 0; k < traj.horizon(); ++k) {
    Vector z(zb.size());
    z << traj.x.row(k).transpose(), traj.u.row(k).transpose(), traj.v.row(k).transpose();
    const double dev =
        zb.size() == 0 ? 0.0 : (z - zb).lpNorm<Eigen::Infinity>();
    if (dev <= eps) {
      out.push_back(k);
    }
  }
  return out;
}

std::pair<int, int> longest_run(const std::vector<int>& indices) {
  std::pair<int, int> best{-1, -1};
  int best_len = 0;
  std::size_t i = 0;
  while (i < indices.size()) {
    std::size_t j = i;
    while (j + 1 < indices.size() && indices[j + 1] == indices[j] + 1) ++j;
    const int len = static_cast<int>(j - i + 1);
    if (len > best_len) {
      best_len = len;
      best = {indices[i], indices[j]};
    }
    i = j + 1;
  }
  return best;
}

bool check_integer_turnpike(const Trajectory& traj, const SteadyState& z_bar,
                            double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("integer turnpike check needs 0 < eps < 1");
  }
  for (int k : compute_Q_eps(traj, z_bar, eps)) {
    for (std::size_t j = 0; j < z_bar.v_bar.size(); ++j) {
      if (std::lround(traj.v(k, static_cast<Eigen::Index>(j))) != z_bar.v_bar[j]) {
        return false;
      }
    }
  }
  return true;
}

double fit_C(const std::vector<TurnpikeCell>& cells) {
  double C = 0.0;
  for (const auto& cell : cells) {
    if (cell.status == bnb::to_string(bnb::BnbStatus::Optimal)) {
      C = std::max(C, cell.out_count * cell.eps * cell.eps);
    }
  }
  return C;
}

TurnpikeReport turnpike_profile(const MiocpInstance& inst,
                                const std::vector<Vector>& x0_list,
                                const std::vector<int>& N_list,
                                const std::vector<double>& eps_grid,
                                const bnb::BnbConfig& cfg, int jobs) {
  TurnpikeReport report;
  report.z_bar = solve_steady_state(inst);

  for (int N : N_list) {
    for (std::size_t i = 0; i < x0_list.size(); ++i) {
      TurnpikeRun run;
      run.x0_id = static_cast<int>(i);
      run.N = N;
      report.runs.push_back(std::move(run));
    }
  }
  parallel_for(report.runs.size(), jobs, [&](std::size_t r) {
    TurnpikeRun& run = report.runs[r];
    try {
      const MiocpInstance cell =
          with_initial_state(with_horizon(inst, run.N), x0_list[run.x0_id]);
      const bnb::BnbResult res = bnb::solve_bnb(cell, {}, cfg);
      run.status = bnb::to_string(res.status);
      run.J = res.J;
      run.traj = res.traj;
    } catch (const std::exception& e) {
      run.status = std::string("error: ") + e.what();
    }
  });

  for (const auto& run : report.runs) {
    for (double eps : eps_grid) {
      TurnpikeCell cell;
      cell.x0_id = run.x0_id;
      cell.N = run.N;
      cell.eps = eps;
      cell.status = run.status;
      if (run.status == bnb::to_string(bnb::BnbStatus::Optimal)) {
        const std::vector<int> q = compute_Q_eps(run.traj, report.z_bar, eps);
        cell.out_count = run.N - static_cast<int>(q.size());
        std::tie(cell.entry_end, cell.leave_start) = longest_run(q);
      }
      report.cells.push_back(cell);
    }
  }
  report.C_fit = fit_C(report.cells);
  return report;
}

}  // namespace tmiqp
