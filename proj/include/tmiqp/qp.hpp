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

// Convex quadratic programs of the form
//
//   min  1/2 z'Hz + h'z + constant
//   s.t. E z = e
//        C z <= d
//
// solved by a primal-dual (Mehrotra predictor-corrector) interior-point
// method. Two storage schemes share the same iteration:
//
//   * DenseQp   - dense H, E, C; KKT solved by Bunch-Kaufman LDL'.
//   * OcpQp     - stage-structured optimal control QP; KKT solved by a
//                 backward Riccati recursion in O(K (nx + nw)^3).

#ifndef TMIQP_QP_HPP
#define TMIQP_QP_HPP

#include <memory>
#include <string>
#include <vector>

#include "tmiqp/model.hpp"

namespace tmiqp::qp {

enum class QpStatus { Optimal, Infeasible, IterationLimit, NonconvexRejected };

std::string to_string(QpStatus status);

struct IpmSettings {
  double tol = 1e-8;
  int max_iter = 100;
  bool check_convexity = true;
  /// Suspected infeasibility is confirmed with an elastic phase-1 solve.
  bool verify_infeasibility = true;
};

struct QpSolution {
  QpStatus status = QpStatus::IterationLimit;
  Vector z;
  Vector y;       // equality multipliers
  Vector lambda;  // inequality multipliers
  Vector s;       // inequality slacks
  double objective = kInf;
  /// max of the scaled dual, equality and inequality residuals and the
  /// complementarity measure s'lambda / m.
  double kkt_residual = kInf;
  int iterations = 0;
};

/// Solves [H + C' diag(sigma) C, E'; E, 0] [dz; dy] = [rd; rp].
class KktSolver {
 public:
  virtual ~KktSolver() = default;
  virtual bool factor(const Vector& sigma) = 0;
  virtual void solve(const Vector& rd, const Vector& rp, Vector& dz,
                     Vector& dy) const = 0;
};

class QpProblem {
 public:
  virtual ~QpProblem() = default;

  virtual Eigen::Index num_vars() const = 0;
  virtual Eigen::Index num_eq() const = 0;
  virtual Eigen::Index num_ineq() const = 0;

  // out = H z, C z, C' lambda, E z, E' y. `out` is resized as needed.
  virtual void apply_H(const Vector& z, Vector& out) const = 0;
  virtual void apply_C(const Vector& z, Vector& out) const = 0;
  virtual void apply_Ct(const Vector& lambda, Vector& out) const = 0;
  virtual void apply_E(const Vector& z, Vector& out) const = 0;
  virtual void apply_Et(const Vector& y, Vector& out) const = 0;

  Vector mul_H(const Vector& z) const { Vector o; apply_H(z, o); return o; }
  Vector mul_C(const Vector& z) const { Vector o; apply_C(z, o); return o; }
  Vector mul_Ct(const Vector& l) const { Vector o; apply_Ct(l, o); return o; }
  Vector mul_E(const Vector& z) const { Vector o; apply_E(z, o); return o; }
  Vector mul_Et(const Vector& y) const { Vector o; apply_Et(y, o); return o; }

  virtual const Vector& h() const = 0;
  virtual const Vector& d() const = 0;
  virtual const Vector& e() const = 0;
  virtual double constant() const = 0;

  virtual std::unique_ptr<KktSolver> make_kkt_solver() const = 0;

  /// True when H is positive semidefinite on the nullspace of E, up to
  /// -tol (1 + |H|).
  virtual bool reduced_hessian_psd(double tol) const = 0;

  /// Phase-1 problem: every inequality row is relaxed by a nonnegative
  /// elastic variable whose sum is minimized (plus regularization/2 |z|^2).
  virtual std::unique_ptr<QpProblem> elastic(double regularization) const = 0;

  /// Sum of the elastic variables in a point of the phase-1 problem.
  virtual double elastic_violation(const Vector& z) const = 0;

  double objective(const Vector& z) const;
};

struct DenseQp final : public QpProblem {
  Matrix H;
  Vector h_;
  Matrix E;
  Vector e_;
  Matrix C;
  Vector d_;
  double constant_ = 0.0;
  int elastic_vars = 0;  // trailing elastic variables (phase-1 only)

  Eigen::Index num_vars() const override { return H.rows(); }
  Eigen::Index num_eq() const override { return E.rows(); }
  Eigen::Index num_ineq() const override { return C.rows(); }

  void apply_H(const Vector& z, Vector& o) const override { o.noalias() = H * z; }
  void apply_C(const Vector& z, Vector& o) const override { o.noalias() = C * z; }
  void apply_Ct(const Vector& l, Vector& o) const override { o.noalias() = C.transpose() * l; }
  void apply_E(const Vector& z, Vector& o) const override { o.noalias() = E * z; }
  void apply_Et(const Vector& y, Vector& o) const override { o.noalias() = E.transpose() * y; }

  const Vector& h() const override { return h_; }
  const Vector& d() const override { return d_; }
  const Vector& e() const override { return e_; }
  double constant() const override { return constant_; }

  std::unique_ptr<KktSolver> make_kkt_solver() const override;
  bool reduced_hessian_psd(double tol) const override;
  std::unique_ptr<QpProblem> elastic(double regularization) const override;
  double elastic_violation(const Vector& z) const override;

  /// Throws DimensionError when the blocks are not conformant.
  void check() const;
};

/// One stage of an optimal control QP. Stage k owns a state block x_k (may be
/// empty, e.g. a fixed initial state) and a control block w_k (may be empty).
/// Dynamics link stage k to k+1: x_{k+1} = A x_k + B w_k + c. The last stage
/// has no dynamics.
struct QpStage {
  Matrix Hxx, Hxw, Hww;
  Vector hx, hw;
  Matrix Cx, Cw;  // rows: Cx x_k + Cw w_k <= d
  Vector d;
  Matrix A, B;
  Vector c;
  int elastic_index = -1;  // position of the phase-1 elastic variable in w_k

  int nx() const { return static_cast<int>(Hxx.rows()); }
  int nw() const { return static_cast<int>(Hww.rows()); }
  int rows() const { return static_cast<int>(d.size()); }

  static QpStage empty(int nx, int nw);
};

class OcpQp final : public QpProblem {
 public:
  OcpQp() = default;
  OcpQp(std::vector<QpStage> stages, double constant);

  const std::vector<QpStage>& stages() const { return stages_; }

  Eigen::Index num_vars() const override { return nvar_; }
  Eigen::Index num_eq() const override { return neq_; }
  Eigen::Index num_ineq() const override { return nineq_; }

  void apply_H(const Vector& z, Vector& out) const override;
  void apply_C(const Vector& z, Vector& out) const override;
  void apply_Ct(const Vector& lambda, Vector& out) const override;
  void apply_E(const Vector& z, Vector& out) const override;
  void apply_Et(const Vector& y, Vector& out) const override;

  const Vector& h() const override { return h_; }
  const Vector& d() const override { return d_; }
  const Vector& e() const override { return e_; }
  double constant() const override { return constant_; }

  std::unique_ptr<KktSolver> make_kkt_solver() const override;
  bool reduced_hessian_psd(double tol) const override;
  std::unique_ptr<QpProblem> elastic(double regularization) const override;
  double elastic_violation(const Vector& z) const override;

  Eigen::Index x_offset(int k) const { return var_offset_[k]; }
  Eigen::Index w_offset(int k) const { return var_offset_[k] + stages_[k].nx(); }
  Eigen::Index eq_offset(int k) const { return eq_offset_[k]; }
  Eigen::Index ineq_offset(int k) const { return ineq_offset_[k]; }

  /// Stacked dense copy, for cross-checks.
  DenseQp to_dense() const;

 private:
  std::vector<QpStage> stages_;
  double constant_ = 0.0;
  std::vector<Eigen::Index> var_offset_, eq_offset_, ineq_offset_;
  Eigen::Index nvar_ = 0, neq_ = 0, nineq_ = 0;
  Vector h_, d_, e_;
  // Nonzeros of the inequality rows, by global row and variable index.
  std::vector<int> row_start_, col_;
  std::vector<double> val_;

  friend class RiccatiKktSolver;
};

/// Runs the interior-point method. Never throws for numerical trouble; the
/// outcome is carried by QpSolution::status.
QpSolution solve(const QpProblem& problem, const IpmSettings& settings = {});

}  // namespace tmiqp::qp

#endif  // TMIQP_QP_HPP
