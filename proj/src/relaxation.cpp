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

#include "tmiqp/relaxation.hpp"

#include <cmath>
#include <stdexcept>

namespace tmiqp {

namespace {

constexpr double kConstantRowTolerance = 1e-9;

// Collects one-sided rows cx'x + cw'w <= rhs for a single stage, stored
// flat as (cx, cw) per row.
class StageRows {
 public:
  StageRows(int nx, int nw) : nx_(nx), nw_(nw) {}

  // lo <= cx'x + cw'w + offset <= hi, with infinite sides dropped. Null
  // coefficient pointers stand for zeros.
  void add_range(const double* cx, const double* cw, double offset, double lo,
                 double hi) {
    bool has_vars = false;
    for (int i = 0; cx && i < nx_; ++i) has_vars |= cx[i] != 0.0;
    for (int i = 0; cw && i < nw_; ++i) has_vars |= cw[i] != 0.0;
    if (!has_vars) {
      if (offset < lo - kConstantRowTolerance ||
          offset > hi + kConstantRowTolerance) {
        violated_ = true;
      }
      return;
    }
    if (std::isfinite(hi)) {
      push(cx, cw, 1.0, hi - offset);
    }
    if (std::isfinite(lo)) {
      push(cx, cw, -1.0, offset - lo);
    }
  }

  // lo <= y_i <= hi for one stage variable, y = (x, w).
  void add_bound(int i, double lo, double hi) {
    unit_.assign(nx_ + nw_, 0.0);
    unit_[i] = 1.0;
    add_range(unit_.data(), unit_.data() + nx_, 0.0, lo, hi);
  }

  bool violated() const { return violated_; }

  void emit(qp::QpStage& stage) const {
    const int m = static_cast<int>(rhs_.size());
    const int n = nx_ + nw_;
    stage.Cx.resize(m, nx_);
    stage.Cw.resize(m, nw_);
    stage.d.resize(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < nx_; ++j) stage.Cx(i, j) = coef_[i * n + j];
      for (int j = 0; j < nw_; ++j) stage.Cw(i, j) = coef_[i * n + nx_ + j];
      stage.d(i) = rhs_[i];
    }
  }

 private:
  void push(const double* cx, const double* cw, double sign, double rhs) {
    for (int i = 0; i < nx_; ++i) coef_.push_back(cx ? sign * cx[i] : 0.0);
    for (int i = 0; i < nw_; ++i) coef_.push_back(cw ? sign * cw[i] : 0.0);
    rhs_.push_back(rhs);
  }

  int nx_, nw_;
  std::vector<double> coef_, rhs_, unit_;
  bool violated_ = false;
};

Vector to_vector(const IntVector& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v[i];
  }
  return out;
}

}  // namespace

PartialAssignment PartialAssignment::full(const std::vector<IntVector>& values) {
  PartialAssignment pa(static_cast<int>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) {
    pa.fix(static_cast<int>(k), values[k]);
  }
  return pa;
}

int PartialAssignment::fixed_stages() const {
  int count = 0;
  for (const auto& e : entries_) {
    count += e.has_value() ? 1 : 0;
  }
  return count;
}

bool PartialAssignment::is_extended_by(const PartialAssignment& other) const {
  if (other.horizon() != horizon()) {
    return false;
  }
  for (int k = 0; k < horizon(); ++k) {
    if (is_fixed(k) && (!other.is_fixed(k) || other.value(k) != value(k))) {
      return false;
    }
  }
  return true;
}

void check_assignment(const MiocpInstance& inst, const PartialAssignment& pa) {
  if (pa.horizon() != inst.N) {
    throw std::invalid_argument("partial assignment length " +
                                std::to_string(pa.horizon()) + " != N " +
                                std::to_string(inst.N));
  }
  for (int k = 0; k < pa.horizon(); ++k) {
    if (!pa.is_fixed(k)) {
      continue;
    }
    const auto& v = pa.value(k);
    if (static_cast<int>(v.size()) != inst.nv()) {
      throw std::invalid_argument("stage " + std::to_string(k) +
                                  ": fixed vector has wrong length");
    }
    for (int j = 0; j < inst.nv(); ++j) {
      if (!inst.constraints.channel_contains(j, v[j])) {
        throw std::invalid_argument("stage " + std::to_string(k) + ": value " +
                                    std::to_string(v[j]) +
                                    " is not in channel " + std::to_string(j));
      }
    }
  }
}

RelaxationQp build_relaxation(const MiocpInstance& inst,
                              const PartialAssignment& pa) {
  check_assignment(inst, pa);
  const int N = inst.N;
  const int nx = inst.nx();
  const int nu = inst.nu();
  const int nv = inst.nv();
  const auto& cs = inst.constraints;
  const Vector c_dyn = inst.dyn.c.size() == nx ? inst.dyn.c : Vector::Zero(nx);

  RelaxationQp out;
  out.pa = pa;
  out.N = N;
  out.nx = nx;
  out.nu = nu;
  out.nv = nv;
  out.x0 = inst.x0;

  std::vector<qp::QpStage> stages;
  stages.reserve(N + 1);
  double constant = 0.0;

  for (int k = 0; k < N; ++k) {
    const bool fixed = pa.is_fixed(k);
    const int sx = k == 0 ? 0 : nx;
    const int sw = nu + (fixed ? 0 : nv);
    qp::QpStage st = qp::QpStage::empty(sx, sw);
    const StageCost& cost = inst.stage_costs[k];
    const Vector vf = fixed ? to_vector(pa.value(k)) : Vector::Zero(nv);

    // Cost.
    const Matrix Ruu = cost.R.topLeftCorner(nu, nu);
    const Matrix Ruv = cost.R.topRightCorner(nu, nv);
    const Matrix Rvv = cost.R.bottomRightCorner(nv, nv);
    const Vector ru = cost.r.head(nu);
    const Vector rv = cost.r.tail(nv);
    if (fixed) {
      st.Hww = 2.0 * Ruu;
      st.hw = ru + 2.0 * Ruv * vf;
      constant += vf.dot(Rvv * vf) + rv.dot(vf);
    } else {
      st.Hww = 2.0 * cost.R;
      st.hw = cost.r;
    }
    constant += cost.constant;
    if (k == 0) {
      constant += inst.x0.dot(cost.Q * inst.x0) + cost.q.dot(inst.x0);
    } else {
      st.Hxx = 2.0 * cost.Q;
      st.hx = cost.q;
    }

    // Dynamics into stage k + 1.
    st.B.resize(nx, sw);
    st.B.leftCols(nu) = inst.dyn.B1;
    st.c = c_dyn;
    if (fixed) {
      st.c += inst.dyn.B2 * vf;
    } else {
      st.B.rightCols(nv) = inst.dyn.B2;
    }
    if (k == 0) {
      st.A.resize(nx, 0);
      st.c += inst.dyn.A * inst.x0;
    } else {
      st.A = inst.dyn.A;
    }

    // Constraints.
    StageRows rows(sx, sw);
    for (int i = 0; i < nx; ++i) {
      if (k == 0) {
        rows.add_range(nullptr, nullptr, inst.x0(i), cs.x_lo(i), cs.x_hi(i));
      } else {
        rows.add_bound(i, cs.x_lo(i), cs.x_hi(i));
      }
    }
    for (int i = 0; i < nu; ++i) {
      rows.add_bound(sx + i, cs.u_lo(i), cs.u_hi(i));
    }
    if (!fixed) {
      for (int j = 0; j < nv; ++j) {
        rows.add_bound(sx + nu + j, cs.channel_min(j), cs.channel_max(j));
      }
    }
    Vector cw(sw);
    for (const auto& row : cs.mixed) {
      cw.head(nu) = row.gu;
      double offset = 0.0;
      if (fixed) {
        offset += row.gv.dot(vf);
      } else {
        cw.tail(nv) = row.gv;
      }
      if (k == 0) {
        offset += row.gx.dot(inst.x0);
      }
      rows.add_range(k == 0 ? nullptr : row.gx.data(), cw.data(), offset, row.lo,
                     row.hi);
    }
    rows.emit(st);
    out.trivially_infeasible |= rows.violated();
    stages.push_back(std::move(st));
  }

  // Terminal stage: x(N) only.
  {
    qp::QpStage st = qp::QpStage::empty(nx, 0);
    const StageCost& term = inst.terminal_cost;
    if (term.Q.size() > 0) {
      st.Hxx = 2.0 * term.Q;
    }
    if (term.q.size() > 0) {
      st.hx = term.q;
    }
    constant += term.constant;
    StageRows rows(nx, 0);
    for (int i = 0; i < nx; ++i) {
      rows.add_bound(i, cs.x_lo(i), cs.x_hi(i));
    }
    rows.emit(st);
    stages.push_back(std::move(st));
  }

  out.qp = qp::OcpQp(std::move(stages), constant);
  return out;
}

RelaxedSolution solve_qp(const RelaxationQp& relaxation, double tol,
                         int max_iter, bool check_convexity) {
  RelaxedSolution out;
  if (relaxation.trivially_infeasible) {
    out.status = qp::QpStatus::Infeasible;
    return out;
  }
  qp::IpmSettings settings;
  settings.tol = tol;
  settings.max_iter = max_iter;
  settings.check_convexity = check_convexity;
  const qp::QpSolution sol = qp::solve(relaxation.qp, settings);
  out.status = sol.status;
  out.kkt_residual = sol.kkt_residual;
  out.iterations = sol.iterations;
  if (sol.status != qp::QpStatus::Optimal) {
    return out;
  }
  out.objective = sol.objective;

  const int N = relaxation.N;
  const int nu = relaxation.nu;
  const int nv = relaxation.nv;
  const auto& ocp = relaxation.qp;
  Trajectory& traj = out.traj;
  traj.x.resize(N + 1, relaxation.nx);
  traj.u.resize(N, nu);
  traj.v.resize(N, nv);
  traj.x.row(0) = relaxation.x0.transpose();
  for (int k = 0; k < N; ++k) {
    if (k > 0) {
      traj.x.row(k) = sol.z.segment(ocp.x_offset(k), relaxation.nx).transpose();
    }
    const auto w = sol.z.segment(ocp.w_offset(k), ocp.stages()[k].nw());
    traj.u.row(k) = w.head(nu).transpose();
    if (relaxation.pa.is_fixed(k)) {
      traj.v.row(k) = to_vector(relaxation.pa.value(k)).transpose();
    } else {
      traj.v.row(k) = w.tail(nv).transpose();
    }
  }
  traj.x.row(N) = sol.z.segment(ocp.x_offset(N), relaxation.nx).transpose();
  return out;
}

namespace {

// Nearest channel member to `value`.
int nearest_member(const IntVector& set, double value) {
  int best = set.front();
  for (int member : set) {
    if (std::abs(member - value) < std::abs(best - value)) {
      best = member;
    }
  }
  return best;
}

}  // namespace

bool is_integer_feasible(const RelaxedSolution& sol, const MiocpInstance& inst,
                         double tol) {
  if (sol.status != qp::QpStatus::Optimal) {
    return false;
  }
  for (Eigen::Index k = 0; k < sol.traj.v.rows(); ++k) {
    for (int j = 0; j < inst.nv(); ++j) {
      const double value = sol.traj.v(k, j);
      const int member = nearest_member(inst.constraints.v_sets[j], value);
      if (std::abs(member - value) > tol) {
        return false;
      }
    }
  }
  return true;
}

std::vector<IntVector> rounded_integers(const RelaxedSolution& sol,
                                        const MiocpInstance& inst) {
  std::vector<IntVector> out(static_cast<std::size_t>(sol.traj.v.rows()),
                             IntVector(inst.nv()));
  for (Eigen::Index k = 0; k < sol.traj.v.rows(); ++k) {
    for (int j = 0; j < inst.nv(); ++j) {
      out[k][j] = nearest_member(inst.constraints.v_sets[j], sol.traj.v(k, j));
    }
  }
  return out;
}

}  // namespace tmiqp
