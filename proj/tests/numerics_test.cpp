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

#include "tmiqp/numerics.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "gtest/gtest.h"
#include "tmiqp/builtin.hpp"

namespace tmiqp::numerics {
namespace {

Matrix random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g;
  Matrix M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = g(rng);
  return M;
}

// Truncated series sum_k (A')^k W A^k.
Matrix stein_series(const Matrix& A, const Matrix& W, int terms) {
  Matrix P = Matrix::Zero(W.rows(), W.cols());
  Matrix Ak = Matrix::Identity(A.rows(), A.cols());
  for (int k = 0; k < terms; ++k) {
    P += Ak.transpose() * W * Ak;
    Ak = Ak * A;
  }
  return P;
}

TEST(SteinTest, ScalarClosedForms) {
  const double eps = 0.01;
  const SteinSolution a = solve_stein(Matrix::Constant(1, 1, 2.0),
                                      Matrix::Constant(1, 1, eps));
  EXPECT_NEAR(a.P(0, 0), -eps / 3.0, 1e-15);
  const SteinSolution b = solve_stein(Matrix::Constant(1, 1, 0.8),
                                      Matrix::Constant(1, 1, 5.0));
  EXPECT_NEAR(b.P(0, 0), 5.0 / 0.36, 1e-12);
}

TEST(SteinTest, IdentityEigenvalueIsSingular) {
  EXPECT_THROW(solve_stein(Matrix::Ones(1, 1), Matrix::Ones(1, 1)), SingularError);
  EXPECT_THROW(solve_stein(Matrix::Identity(3, 3), Matrix::Identity(3, 3)),
               SingularError);
}

TEST(SteinTest, StableMatchesSeries) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial;
    Matrix A = random_matrix(rng, n, n);
    const double rho =
        A.eigenvalues().cwiseAbs().maxCoeff();
    A *= 0.7 / rho;
    Matrix W = random_matrix(rng, n, n);
    W = (W + W.transpose()).eval();
    const SteinSolution s = solve_stein(A, W);
    EXPECT_LE(s.residual_norm, 1e-8 * W.norm());
    EXPECT_LE((s.P - A.transpose() * s.P * A - W).norm(), 1e-8 * W.norm());
    // 0.7^80 is below 1e-12.
    EXPECT_LE((s.P - stein_series(A, W, 80)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(SteinTest, NilpotentShiftIsFiniteSum) {
  for (int n : {3, 8}) {
    const Matrix E = builtin::shift_matrix(n);
    const Matrix W = 0.5 * Matrix::Identity(n, n) - 100.0 * Matrix::Identity(n, n);
    const SteinSolution s = solve_stein(E, W);
    EXPECT_LE((s.P - stein_series(E, W, n)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(MinEigenvalueTest, KnownSpectra) {
  EXPECT_NEAR(min_eigenvalue_symmetric(Matrix::Identity(3, 3)), 1.0, 1e-12);
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 5.0;
  D(1, 1) = -2.0;
  EXPECT_NEAR(min_eigenvalue_symmetric(D), -2.0, 1e-12);
  Matrix M(2, 2);
  M << 2.0, 1.0, 1.0, 2.0;
  EXPECT_NEAR(min_eigenvalue_symmetric(M), 1.0, 1e-12);
}

TEST(MinEigenvalueTest, ShiftsWithIdentity) {
  std::mt19937_64 rng(3);
  Matrix M = random_matrix(rng, 6, 6);
  M = (M + M.transpose()).eval();
  const double base = min_eigenvalue_symmetric(M);
  for (double c : {-3.0, 0.5, 10.0}) {
    const Matrix shifted = M + c * Matrix::Identity(6, 6);
    EXPECT_NEAR(min_eigenvalue_symmetric(shifted), base + c,
                1e-10 * (1.0 + shifted.norm()));
  }
}

TEST(MinEigenvalueTest, NonFiniteThrows) {
  Matrix M = Matrix::Identity(2, 2);
  M(0, 1) = M(1, 0) = std::nan("");
  EXPECT_THROW(min_eigenvalue_symmetric(M), std::domain_error);
}

TEST(SymmetricSolveTest, Examples) {
  Vector b(3);
  b << 1.0, -2.0, 3.0;
  EXPECT_LE((solve_symmetric_indefinite(Matrix::Identity(3, 3), b) - b).norm(), 1e-14);

  Matrix K(2, 2);
  K << 0.0, 1.0, 1.0, 0.0;
  Vector c(2);
  c << 1.0, 2.0;
  const Vector x = solve_symmetric_indefinite(K, c);
  EXPECT_NEAR(x(0), 2.0, 1e-14);
  EXPECT_NEAR(x(1), 1.0, 1e-14);

  EXPECT_THROW(solve_symmetric_indefinite(Matrix::Zero(2, 2), c), SingularError);
}

TEST(SymmetricSolveTest, RandomKktSystem) {
  std::mt19937_64 rng(9);
  const int n = 8, m = 3;
  Matrix G = random_matrix(rng, n, n);
  const Matrix H = G * G.transpose();
  const Matrix E = random_matrix(rng, m, n);
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = H;
  K.topRightCorner(n, m) = E.transpose();
  K.bottomLeftCorner(m, n) = E;
  const Vector b = random_matrix(rng, n + m, 1);
  const Vector x = solve_symmetric_indefinite(K, b);
  EXPECT_LE((K * x - b).norm(), 1e-8 * (1.0 + b.norm()));
}

}  // namespace
}  // namespace tmiqp::numerics
