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

#include "tmiqp/qp.hpp"

#include <random>

#include "gtest/gtest.h"
#include "tmiqp/numerics.hpp"

namespace tmiqp::qp {
namespace {

DenseQp small_dense() {
  // min 1/2 (x^2 + y^2) - x  s.t. x + y = 1, x <= 0.3
  DenseQp qp;
  qp.H = Matrix::Identity(2, 2);
  qp.h_ = Vector(2);
  qp.h_ << -1.0, 0.0;
  qp.E = Matrix(1, 2);
  qp.E << 1.0, 1.0;
  qp.e_ = Vector::Ones(1);
  qp.C = Matrix(1, 2);
  qp.C << 1.0, 0.0;
  qp.d_ = Vector::Constant(1, 0.3);
  return qp;
}

TEST(DenseQpTest, ActiveInequality) {
  const DenseQp qp = small_dense();
  const QpSolution sol = solve(qp);
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_NEAR(sol.z(0), 0.3, 1e-7);
  EXPECT_NEAR(sol.z(1), 0.7, 1e-7);
  EXPECT_NEAR(sol.objective, -0.01, 1e-8);
  EXPECT_LE(sol.kkt_residual, 1e-8);
}

TEST(DenseQpTest, EqualityOnlyIsOneNewtonStep) {
  DenseQp qp = small_dense();
  qp.C.resize(0, 2);
  qp.d_.resize(0);
  const QpSolution sol = solve(qp);
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_NEAR(sol.z(0), 1.0, 1e-10);
  EXPECT_NEAR(sol.z(1), 0.0, 1e-10);
  EXPECT_LE(sol.iterations, 1);
}

TEST(DenseQpTest, ContradictoryBoundsAreInfeasible) {
  DenseQp qp;
  qp.H = Matrix::Identity(1, 1);
  qp.h_ = Vector::Zero(1);
  qp.E.resize(0, 1);
  qp.e_.resize(0);
  qp.C = Matrix(2, 1);
  qp.C << 1.0, -1.0;  // x <= -1 and -x <= -1
  qp.d_ = Vector::Constant(2, -1.0);
  const QpSolution sol = solve(qp);
  EXPECT_EQ(sol.status, QpStatus::Infeasible);
}

TEST(DenseQpTest, NonconvexIsRejected) {
  DenseQp qp = small_dense();
  qp.H << -1.0, 0.0, 0.0, -1.0;
  EXPECT_EQ(solve(qp).status, QpStatus::NonconvexRejected);
  // Negative curvature along x - y only; the equality x + y = 1 keeps it.
  qp.H << 0.0, 1.0, 1.0, 0.0;
  EXPECT_EQ(solve(qp).status, QpStatus::NonconvexRejected);
  // Curvature -1 along x + y, which the equality removes.
  qp.H << -0.5, -0.5, -0.5, -0.5;
  qp.H += Matrix::Identity(2, 2);
  EXPECT_NE(solve(qp).status, QpStatus::NonconvexRejected);
}

// Random stage-structured problem with box constraints on every variable.
OcpQp random_ocp(std::mt19937_64& rng, int K, int nx, int nw, bool boxes) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto rand_matrix = [&](int r, int c) {
    Matrix M(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) M(i, j) = U(rng);
    return M;
  };
  std::vector<QpStage> stages;
  for (int k = 0; k < K; ++k) {
    const int sx = k == 0 ? 0 : nx;
    const int sw = k + 1 == K ? 0 : nw;
    QpStage s = QpStage::empty(sx, sw);
    const Matrix G = rand_matrix(sx + sw, sx + sw);
    const Matrix H = G * G.transpose() + 0.1 * Matrix::Identity(sx + sw, sx + sw);
    s.Hxx = H.topLeftCorner(sx, sx);
    s.Hxw = H.topRightCorner(sx, sw);
    s.Hww = H.bottomRightCorner(sw, sw);
    s.hx = rand_matrix(sx, 1);
    s.hw = rand_matrix(sw, 1);
    if (boxes) {
      const int n = sx + sw;
      Matrix Cfull(2 * n, n);
      Cfull << Matrix::Identity(n, n), -Matrix::Identity(n, n);
      s.Cx = Cfull.leftCols(sx);
      s.Cw = Cfull.rightCols(sw);
      s.d = Vector::Constant(2 * n, 0.3);
    }
    if (k + 1 < K) {
      s.A = 0.9 * rand_matrix(nx, sx);
      s.B = rand_matrix(nx, sw);
      s.c = rand_matrix(nx, 1);
      if (boxes) s.c *= 0.05;
    }
    stages.push_back(std::move(s));
  }
  return OcpQp(std::move(stages), 0.0);
}

TEST(OcpQpTest, RiccatiMatchesDenseKkt) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const OcpQp ocp = random_ocp(rng, 6, 3, 2, true);
    const QpSolution a = solve(ocp);
    const QpSolution b = solve(ocp.to_dense());
    ASSERT_EQ(a.status, b.status) << "trial " << trial;
    if (a.status == QpStatus::Optimal) {
      EXPECT_NEAR(a.objective, b.objective, 1e-7);
      EXPECT_LE((a.z - b.z).lpNorm<Eigen::Infinity>(), 1e-5);
    }
  }
}

TEST(OcpQpTest, UnconstrainedMatchesDirectKktSolve) {
  std::mt19937_64 rng(11);
  const OcpQp ocp = random_ocp(rng, 8, 4, 2, false);
  const QpSolution sol = solve(ocp);
  ASSERT_EQ(sol.status, QpStatus::Optimal);

  const DenseQp dense = ocp.to_dense();
  const auto n = dense.num_vars();
  const auto me = dense.num_eq();
  Matrix K = Matrix::Zero(n + me, n + me);
  K.topLeftCorner(n, n) = dense.H;
  K.topRightCorner(n, me) = dense.E.transpose();
  K.bottomLeftCorner(me, n) = dense.E;
  Vector rhs(n + me);
  rhs << -dense.h_, dense.e_;
  const Vector x = numerics::solve_symmetric_indefinite(K, rhs);
  EXPECT_LE((sol.z - x.head(n)).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(OcpQpTest, ElasticProblemOfFeasibleQpHasZeroViolation) {
  std::mt19937_64 rng(3);
  const OcpQp ocp = random_ocp(rng, 5, 2, 2, true);
  const auto phase1 = ocp.elastic(1e-6);
  IpmSettings settings;
  settings.check_convexity = false;
  settings.verify_infeasibility = false;
  const QpSolution sol = solve(*phase1, settings);
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_LT(phase1->elastic_violation(sol.z), 1e-6);
}

}  // namespace
}  // namespace tmiqp::qp
