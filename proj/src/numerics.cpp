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

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace tmiqp::numerics {

namespace {

constexpr double kSteinRcondThreshold = 1e-12;

}  // namespace

SteinSolution solve_stein(const Matrix& A, const Matrix& W) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || W.rows() != n || W.cols() != n) {
    throw DimensionError("solve_stein: A and W must be square and conformant");
  }
  if (n == 0) {
    return {Matrix(0, 0), 0.0};
  }
  const Matrix Wsym = 0.5 * (W + W.transpose());

  // Column-major packing of the upper triangle: (k, l) with k <= l.
  auto index = [n](Eigen::Index k, Eigen::Index l) {
    return l * (l + 1) / 2 + k;
  };
  const Eigen::Index m = n * (n + 1) / 2;
  Matrix lhs = Matrix::Identity(m, m);
  Vector rhs(m);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const Eigen::Index row = index(i, j);
      rhs[row] = Wsym(i, j);
      // (A'PA)_ij = sum_{k,l} A_ki P_kl A_lj with P symmetric.
      for (Eigen::Index l = 0; l < n; ++l) {
        for (Eigen::Index k = 0; k <= l; ++k) {
          const double coeff = (k == l)
                                   ? A(k, i) * A(k, j)
                                   : A(k, i) * A(l, j) + A(l, i) * A(k, j);
          lhs(row, index(k, l)) -= coeff;
        }
      }
    }
  }

  Eigen::PartialPivLU<Matrix> lu(lhs);
  const double rcond = lu.rcond();
  if (!(rcond >= kSteinRcondThreshold)) {
    throw SingularError("solve_stein: P - A'PA map is singular (rcond " +
                        std::to_string(rcond) + ")");
  }
  const Vector packed = lu.solve(rhs);

  SteinSolution out;
  out.P.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      out.P(i, j) = packed[index(i, j)];
      out.P(j, i) = out.P(i, j);
    }
  }
  out.residual_norm = (out.P - A.transpose() * out.P * A - Wsym).norm();
  return out;
}

double min_eigenvalue_symmetric(const Matrix& M) {
  if (M.rows() != M.cols()) {
    throw DimensionError("min_eigenvalue_symmetric: matrix must be square");
  }
  if (!M.allFinite()) {
    throw std::domain_error("min_eigenvalue_symmetric: non-finite entries");
  }
  if (M.size() == 0) {
    return kInf;
  }
  const Matrix sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("min_eigenvalue_symmetric: eigen-iteration failed");
  }
  return eig.eigenvalues()(0);
}

bool SymmetricIndefiniteSolver::factor(const Matrix& K) {
  if (K.rows() != K.cols()) {
    throw DimensionError("SymmetricIndefiniteSolver: matrix must be square");
  }
  original_ = 0.5 * (K + K.transpose());
  regularized_ = false;
  ok_ = false;
  const lapack_int n = static_cast<lapack_int>(K.rows());
  pivots_.assign(static_cast<std::size_t>(n), 0);
  if (n == 0) {
    ok_ = true;
    return true;
  }
  if (!original_.allFinite()) {
    return false;
  }

  factors_ = original_;
  lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, factors_.data(), n,
                                   pivots_.data());
  if (info > 0) {
    // Zero pivot: retry once with a static diagonal shift.
    regularized_ = true;
    factors_ = original_;
    factors_.diagonal().array() += kRegularization;
    info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, factors_.data(), n,
                          pivots_.data());
  }
  ok_ = (info == 0);
  return ok_;
}

Vector SymmetricIndefiniteSolver::raw_solve(const Vector& b) const {
  Vector x = b;
  const lapack_int n = static_cast<lapack_int>(b.size());
  if (n == 0) {
    return x;
  }
  const lapack_int info =
      LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', n, 1, factors_.data(), n,
                     pivots_.data(), x.data(), n);
  if (info != 0) {
    throw std::runtime_error("SymmetricIndefiniteSolver: dsytrs failed");
  }
  return x;
}

Vector SymmetricIndefiniteSolver::solve(const Vector& b) const {
  if (!ok_) {
    throw std::logic_error("SymmetricIndefiniteSolver: solve before factor");
  }
  if (b.size() != original_.rows()) {
    throw DimensionError("SymmetricIndefiniteSolver: rhs length mismatch");
  }
  Vector x = raw_solve(b);
  const Vector residual = b - original_ * x;
  x += raw_solve(residual);
  return x;
}

Vector solve_symmetric_indefinite(const Matrix& K, const Vector& b) {
  if (K.rows() != b.size()) {
    throw DimensionError("solve_symmetric_indefinite: rhs length mismatch");
  }
  SymmetricIndefiniteSolver solver;
  if (!solver.factor(K)) {
    throw SingularError("solve_symmetric_indefinite: factorization failed");
  }
  Vector x = solver.solve(b);
  const Matrix Ksym = 0.5 * (K + K.transpose());
  const double residual = (Ksym * x - b).norm();
  if (!x.allFinite() || residual > 1e-8 * (1.0 + b.norm())) {
    throw SingularError("solve_symmetric_indefinite: singular after regularization");
  }
  return x;
}

}  // namespace tmiqp::numerics
