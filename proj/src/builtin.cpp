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

#include "tmiqp/builtin.hpp"

#include <stdexcept>

namespace tmiqp::builtin {

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    out(i++) = v;
  }
  return out;
}

MixedRow mixed(Vector gx, Vector gu, Vector gv, double lo, double hi) {
  MixedRow row;
  row.gx = std::move(gx);
  row.gu = std::move(gu);
  row.gv = std::move(gv);
  row.lo = lo;
  row.hi = hi;
  return row;
}

}  // namespace

MiocpInstance illustrative(int N, double x0) {
  MiocpInstance inst;
  inst.dyn.A = Matrix::Constant(1, 1, 2.0);
  inst.dyn.B1 = Matrix::Ones(1, 1);
  inst.dyn.B2 = Matrix::Ones(1, 1);
  inst.dyn.c = Vector::Constant(1, -1.0);

  Matrix R = Matrix::Zero(2, 2);
  R(0, 0) = 1.0;
  R(1, 1) = 0.5;
  inst.stage_costs.assign(
      N, StageCost(Matrix::Zero(1, 1), R, Vector::Zero(1), Vector::Zero(2)));
  inst.terminal_cost = StageCost::terminal(Matrix::Zero(1, 1), Vector::Zero(1));

  auto& cs = inst.constraints;
  cs.x_lo = vec({-2.0});
  cs.x_hi = vec({2.0});
  cs.u_lo = vec({-3.0});
  cs.u_hi = vec({3.0});
  cs.v_sets = {{-1, 0, 1}};

  inst.N = N;
  inst.x0 = vec({x0});
  return inst;
}

MiocpInstance example1(int N, double x0, double x_lo, double x_hi, double u_lo,
                       double u_hi) {
  MiocpInstance inst;
  // x1(k+1) = 0.8 x2(k) + u(k); x2 is the second continuous input.
  inst.dyn.A = Matrix::Zero(1, 1);
  inst.dyn.B1 = Matrix(1, 2);
  inst.dyn.B1 << 1.0, 0.8;
  inst.dyn.B2 = Matrix::Zero(1, 1);
  inst.dyn.c = Vector::Zero(1);

  // Weights on (x1, x1^2, u, u^2).
  auto cost = [](double x_linear) {
    Matrix R = Matrix::Zero(3, 3);
    R(0, 0) = 100.0;
    return StageCost(Matrix::Constant(1, 1, 100.0), R, vec({x_linear}),
                     vec({10.0, 0.0, 0.0}));
  };
  inst.stage_costs.assign(N, cost(-10.0));
  inst.stage_costs.back() = cost(-1000.0);
  inst.terminal_cost = StageCost::terminal(Matrix::Zero(1, 1), Vector::Zero(1));

  auto& cs = inst.constraints;
  cs.x_lo = vec({x_lo});
  cs.x_hi = vec({x_hi});
  cs.u_lo = vec({u_lo, -kInf});
  cs.u_hi = vec({u_hi, kInf});
  cs.v_sets = {{0, 1}};
  // 2 v x_lo <= x2 + x1 <= 2 v x_hi
  cs.mixed.push_back(mixed(vec({1.0}), vec({0.0, 1.0}), vec({-2.0 * x_lo}), 0.0, kInf));
  cs.mixed.push_back(mixed(vec({1.0}), vec({0.0, 1.0}), vec({-2.0 * x_hi}), -kInf, 0.0));
  // 2 (v - 1) x_hi <= x2 - x1 <= 2 (v - 1) x_lo
  cs.mixed.push_back(
      mixed(vec({-1.0}), vec({0.0, 1.0}), vec({-2.0 * x_hi}), -2.0 * x_hi, kInf));
  cs.mixed.push_back(
      mixed(vec({-1.0}), vec({0.0, 1.0}), vec({-2.0 * x_lo}), -kInf, -2.0 * x_lo));
  // (1 - v) x_lo <= x1 <= v x_hi
  cs.mixed.push_back(mixed(vec({1.0}), vec({0.0, 0.0}), vec({x_lo}), x_lo, kInf));
  cs.mixed.push_back(mixed(vec({1.0}), vec({0.0, 0.0}), vec({-x_hi}), -kInf, 0.0));

  inst.N = N;
  inst.x0 = vec({x0});
  return inst;
}

Matrix shift_matrix(int n) {
  Matrix E = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    E(i, i + 1) = 1.0;
  }
  return E;
}

MiocpInstance example2(int nx, int N, const Vector& x0) {
  MiocpInstance inst;
  inst.dyn.A = shift_matrix(nx);
  inst.dyn.B1 = Matrix::Zero(nx, 1);
  inst.dyn.B1(nx - 1, 0) = 1.0;
  inst.dyn.B2 = Matrix::Ones(nx, 1);
  inst.dyn.c = Vector::Zero(nx);

  Matrix R = Matrix::Zero(2, 2);
  R(0, 0) = 100.0;
  inst.stage_costs.assign(N, StageCost(100.0 * Matrix::Identity(nx, nx), R,
                                       Vector::Zero(nx), vec({10.0, 1.0})));
  inst.terminal_cost = StageCost::terminal(Matrix::Zero(nx, nx), Vector::Zero(nx));

  auto& cs = inst.constraints;
  cs.x_lo = Vector::Constant(nx, -kInf);
  cs.x_hi = Vector::Constant(nx, kInf);
  cs.u_lo = vec({-kInf});
  cs.u_hi = vec({kInf});
  cs.v_sets = {{0, 1}};

  inst.N = N;
  inst.x0 = x0;
  return inst;
}

MiocpInstance example2(int nx, int N) {
  return example2(nx, N, Vector::Constant(nx, 0.5));
}

std::vector<std::string> names() { return {"illustrative", "example1", "example2"}; }

MiocpInstance by_name(const std::string& name, int N, int nx) {
  if (name == "illustrative") {
    return illustrative(N);
  }
  if (name == "example1") {
    return example1(N);
  }
  if (name == "example2") {
    return example2(nx, N);
  }
  throw std::invalid_argument("unknown builtin instance '" + name + "'");
}

}  // namespace tmiqp::builtin
