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

#include "tmiqp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tmiqp {

namespace {

Matrix symmetrize(const Matrix& M) {
  if (M.rows() != M.cols()) {
    return M;  // reported by validate()
  }
  return 0.5 * (M + M.transpose());
}

bool all_finite(const Matrix& M) { return M.allFinite(); }

bool same_shape_and_values(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

std::string shape(const Matrix& M) {
  std::ostringstream os;
  os << M.rows() << "x" << M.cols();
  return os.str();
}

}  // namespace

Vector LinearDynamics::step(const Vector& x, const Vector& u,
                            const Vector& v) const {
  Vector next = A * x + B1 * u + B2 * v;
  if (c.size() == next.size()) {
    next += c;
  }
  return next;
}

StageCost::StageCost(Matrix Q_, Matrix R_, Vector q_, Vector r_,
                     double constant_)
    : Q(symmetrize(Q_)),
      R(symmetrize(R_)),
      q(std::move(q_)),
      r(std::move(r_)),
      constant(constant_) {}

StageCost StageCost::terminal(Matrix Q_, Vector q_, double constant_) {
  return StageCost(std::move(Q_), Matrix(0, 0), std::move(q_), Vector(0),
                   constant_);
}

StageCost StageCost::zero(int nx, int nu, int nv) {
  return StageCost(Matrix::Zero(nx, nx), Matrix::Zero(nu + nv, nu + nv),
                   Vector::Zero(nx), Vector::Zero(nu + nv), 0.0);
}

double StageCost::evaluate(const Vector& x, const Vector& u,
                           const Vector& v) const {
  Vector w(u.size() + v.size());
  w << u, v;
  return x.dot(Q * x) + w.dot(R * w) + q.dot(x) + r.dot(w) + constant;
}

double StageCost::evaluate_terminal(const Vector& x) const {
  double value = constant;
  if (Q.size() > 0) {
    value += x.dot(Q * x);
  }
  if (q.size() > 0) {
    value += q.dot(x);
  }
  return value;
}

bool StageCost::operator==(const StageCost& other) const {
  return same_shape_and_values(Q, other.Q) && same_shape_and_values(R, other.R) &&
         same_shape_and_values(q, other.q) && same_shape_and_values(r, other.r) &&
         constant == other.constant;
}

bool MixedRow::operator==(const MixedRow& other) const {
  return same_shape_and_values(gx, other.gx) &&
         same_shape_and_values(gu, other.gu) &&
         same_shape_and_values(gv, other.gv) && lo == other.lo &&
         hi == other.hi;
}

bool ConstraintSet::channel_contains(int j, int value) const {
  return std::binary_search(v_sets[j].begin(), v_sets[j].end(), value);
}

bool ConstraintSet::operator==(const ConstraintSet& other) const {
  return same_shape_and_values(x_lo, other.x_lo) &&
         same_shape_and_values(x_hi, other.x_hi) &&
         same_shape_and_values(u_lo, other.u_lo) &&
         same_shape_and_values(u_hi, other.u_hi) && v_sets == other.v_sets &&
         mixed == other.mixed;
}

bool Box::operator==(const Box& other) const {
  return same_shape_and_values(lo, other.lo) &&
         same_shape_and_values(hi, other.hi);
}

long long MiocpInstance::stage_cardinality() const {
  long long count = 1;
  for (const auto& set : constraints.v_sets) {
    count *= static_cast<long long>(set.size());
  }
  return count;
}

bool MiocpInstance::operator==(const MiocpInstance& other) const {
  const bool c_equal =
      (dyn.c.size() == 0 && other.dyn.c.size() == 0) ||
      same_shape_and_values(dyn.c, other.dyn.c) ||
      (dyn.c.size() == 0 && other.dyn.c.isZero(0.0)) ||
      (other.dyn.c.size() == 0 && dyn.c.isZero(0.0));
  return same_shape_and_values(dyn.A, other.dyn.A) &&
         same_shape_and_values(dyn.B1, other.dyn.B1) &&
         same_shape_and_values(dyn.B2, other.dyn.B2) && c_equal &&
         stage_costs == other.stage_costs &&
         terminal_cost == other.terminal_cost &&
         constraints == other.constraints && N == other.N &&
         same_shape_and_values(x0, other.x0) && x0_set == other.x0_set;
}

std::vector<Violation> validate(const MiocpInstance& inst) {
  std::vector<Violation> out;
  auto report = [&out](const char* tag, std::string detail) {
    out.push_back({tag, std::move(detail)});
  };
  namespace vt = violation_tag;

  const auto& d = inst.dyn;
  const int nx = static_cast<int>(d.A.rows());
  const int nu = static_cast<int>(d.B1.cols());
  const int nv = static_cast<int>(d.B2.cols());

  if (d.A.rows() != d.A.cols()) {
    report(vt::kDimensionMismatch, "A must be square, got " + shape(d.A));
  }
  if (d.B1.rows() != nx) {
    report(vt::kDimensionMismatch, "B1 has " + std::to_string(d.B1.rows()) +
                                       " rows, expected " + std::to_string(nx));
  }
  if (d.B2.rows() != nx) {
    report(vt::kDimensionMismatch, "B2 has " + std::to_string(d.B2.rows()) +
                                       " rows, expected " + std::to_string(nx));
  }
  if (d.c.size() != 0 && d.c.size() != nx) {
    report(vt::kDimensionMismatch, "dynamics offset c has wrong length");
  }
  if (!all_finite(d.A) || !all_finite(d.B1) || !all_finite(d.B2) ||
      !all_finite(d.c)) {
    report(vt::kNonFinite, "dynamics matrices must be finite");
  }

  if (inst.N < 1) {
    report(vt::kBadHorizon, "N must be >= 1, got " + std::to_string(inst.N));
  }
  if (static_cast<int>(inst.stage_costs.size()) != inst.N) {
    report(vt::kDimensionMismatch,
           "expected " + std::to_string(inst.N) + " stage costs, got " +
               std::to_string(inst.stage_costs.size()));
  }
  for (std::size_t k = 0; k < inst.stage_costs.size(); ++k) {
    const auto& c = inst.stage_costs[k];
    const std::string where = "stage cost " + std::to_string(k);
    if (c.Q.rows() != nx || c.Q.cols() != nx || c.q.size() != nx) {
      report(vt::kDimensionMismatch, where + ": Q/q must match nx");
    }
    if (c.R.rows() != nu + nv || c.R.cols() != nu + nv || c.r.size() != nu + nv) {
      report(vt::kDimensionMismatch, where + ": R/r must match nu+nv");
    }
    if (!all_finite(c.Q) || !all_finite(c.R) || !all_finite(c.q) ||
        !all_finite(c.r) || !std::isfinite(c.constant)) {
      report(vt::kNonFinite, where + " has non-finite entries");
    }
  }
  {
    const auto& t = inst.terminal_cost;
    if ((t.Q.size() != 0 && (t.Q.rows() != nx || t.Q.cols() != nx)) ||
        (t.q.size() != 0 && t.q.size() != nx)) {
      report(vt::kDimensionMismatch, "terminal cost must act on x(N)");
    }
    if (!all_finite(t.Q) || !all_finite(t.q) || !std::isfinite(t.constant)) {
      report(vt::kNonFinite, "terminal cost has non-finite entries");
    }
  }

  const auto& cs = inst.constraints;
  auto check_box = [&](const Vector& lo, const Vector& hi, int n,
                       const char* name) {
    if (lo.size() != n || hi.size() != n) {
      report(vt::kDimensionMismatch, std::string(name) + " bounds must have " +
                                         std::to_string(n) + " entries");
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (std::isnan(lo[i]) || std::isnan(hi[i])) {
        report(vt::kNonFinite, std::string(name) + " bound is NaN");
      } else if (lo[i] > hi[i]) {
        report(vt::kInvertedBounds,
               std::string(name) + " bound " + std::to_string(i) + ": lo > hi");
      }
    }
  };
  check_box(cs.x_lo, cs.x_hi, nx, "x");
  check_box(cs.u_lo, cs.u_hi, nu, "u");

  if (static_cast<int>(cs.v_sets.size()) != nv) {
    report(vt::kDimensionMismatch, "expected " + std::to_string(nv) +
                                       " integer channels, got " +
                                       std::to_string(cs.v_sets.size()));
  }
  for (std::size_t j = 0; j < cs.v_sets.size(); ++j) {
    const auto& set = cs.v_sets[j];
    if (set.empty()) {
      report(vt::kEmptyIntegerSet, "channel " + std::to_string(j));
    } else if (std::adjacent_find(set.begin(), set.end(), [](int a, int b) {
                 return a >= b;
               }) != set.end()) {
      report(vt::kUnsortedIntegerSet, "channel " + std::to_string(j));
    }
  }

  for (std::size_t i = 0; i < cs.mixed.size(); ++i) {
    const auto& row = cs.mixed[i];
    const std::string where = "mixed row " + std::to_string(i);
    if (row.gx.size() != nx || row.gu.size() != nu || row.gv.size() != nv) {
      report(vt::kDimensionMismatch, where + " coefficient lengths");
    }
    if (!all_finite(row.gx) || !all_finite(row.gu) || !all_finite(row.gv) ||
        std::isnan(row.lo) || std::isnan(row.hi)) {
      report(vt::kNonFinite, where);
    } else if (row.lo > row.hi) {
      report(vt::kInvertedBounds, where + ": lo > hi");
    }
  }

  if (inst.x0.size() != nx) {
    report(vt::kDimensionMismatch, "x0 has " + std::to_string(inst.x0.size()) +
                                       " entries, expected " + std::to_string(nx));
  } else if (cs.x_lo.size() == nx && cs.x_hi.size() == nx) {
    if (!all_finite(inst.x0)) {
      report(vt::kNonFinite, "x0");
    } else if ((inst.x0.array() < cs.x_lo.array()).any() ||
               (inst.x0.array() > cs.x_hi.array()).any()) {
      report(vt::kInitialState, "x0 outside the state bounds");
    }
    if (inst.x0_set) {
      const auto& box = *inst.x0_set;
      if (box.lo.size() != nx || box.hi.size() != nx) {
        report(vt::kDimensionMismatch, "x0_set bounds must have nx entries");
      } else if ((inst.x0.array() < box.lo.array()).any() ||
                 (inst.x0.array() > box.hi.array()).any()) {
        report(vt::kInitialState, "x0 outside x0_set");
      }
    }
  }
  return out;
}

Trajectory simulate(const MiocpInstance& inst, const Matrix& u_seq,
                    const Matrix& v_seq) {
  const int N = inst.N;
  if (u_seq.rows() != N || u_seq.cols() != inst.nu() || v_seq.rows() != N ||
      v_seq.cols() != inst.nv()) {
    throw DimensionError("simulate: input sequences must be N x nu and N x nv");
  }
  if (inst.x0.size() != inst.nx()) {
    throw DimensionError("simulate: x0 does not match A");
  }
  Trajectory traj;
  traj.u = u_seq;
  traj.v = v_seq;
  traj.x.resize(N + 1, inst.nx());
  Vector x = inst.x0;
  traj.x.row(0) = x.transpose();
  for (int k = 0; k < N; ++k) {
    x = inst.dyn.step(x, u_seq.row(k).transpose(), v_seq.row(k).transpose());
    traj.x.row(k + 1) = x.transpose();
  }
  return traj;
}

double total_cost(const MiocpInstance& inst, const Trajectory& traj) {
  double sum = 0.0;
  for (int k = 0; k < inst.N; ++k) {
    sum += inst.stage_costs[k].evaluate(traj.x.row(k).transpose(),
                                        traj.u.row(k).transpose(),
                                        traj.v.row(k).transpose());
  }
  return sum + inst.terminal_cost.evaluate_terminal(traj.x.row(inst.N).transpose());
}

MiocpInstance with_horizon(const MiocpInstance& inst, int N) {
  if (N < 1) {
    throw std::invalid_argument("with_horizon: N must be >= 1");
  }
  MiocpInstance out = inst;
  out.N = N;
  const auto& costs = inst.stage_costs;
  const bool uniform =
      std::all_of(costs.begin(), costs.end(),
                  [&](const StageCost& c) { return c == costs.front(); });
  out.stage_costs.clear();
  if (uniform || costs.size() < 2) {
    out.stage_costs.assign(N, costs.front());
    return out;
  }
  const int body = static_cast<int>(costs.size()) - 1;
  for (int k = 0; k + 1 < N; ++k) {
    out.stage_costs.push_back(costs[std::min(k, body - 1)]);
  }
  out.stage_costs.push_back(costs.back());
  return out;
}

MiocpInstance with_initial_state(const MiocpInstance& inst, const Vector& x0) {
  MiocpInstance out = inst;
  out.x0 = x0;
  return out;
}

}  // namespace tmiqp
