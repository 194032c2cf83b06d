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

#ifndef TMIQP_NUMERICS_HPP
#define TMIQP_NUMERICS_HPP

#include <stdexcept>
#include <vector>

#include "tmiqp/model.hpp"

namespace tmiqp::numerics {

class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SteinSolution {
  Matrix P;
  double residual_norm = 0.0;  // ||P - A'PA - W||_F
};

/// Solves the Stein equation P - A'PA = W for symmetric P.
///
/// The n(n+1)/2 upper-triangular unknowns are stacked and the resulting
/// dense system is solved by LU, so the cost is O(n^6) flops and O(n^4)
/// memory. This is fine up to n ~ 100.
///
/// Throws SingularError when the map P -> P - A'PA is singular, i.e. when
/// some product of eigenvalues of A equals one. Singularity is declared
/// when the reciprocal condition estimate falls below 1e-12.
SteinSolution solve_stein(const Matrix& A, const Matrix& W);

/// Smallest eigenvalue of a symmetric matrix. Throws std::domain_error on
/// non-finite entries.
double min_eigenvalue_symmetric(const Matrix& M);

/// Bunch-Kaufman LDL' factorization of a dense symmetric (possibly
/// indefinite) matrix. A zero pivot triggers a single static diagonal
/// regularization with delta = 1e-10 and a refactorization.
class SymmetricIndefiniteSolver {
 public:
  static constexpr double kRegularization = 1e-10;

  /// Returns false if the matrix is singular even after regularization.
  bool factor(const Matrix& K);

  /// Solves with one step of iterative refinement against the unregularized
  /// matrix. Requires a successful factor().
  Vector solve(const Vector& b) const;

  bool regularized() const { return regularized_; }

 private:
  Matrix original_;
  Matrix factors_;
  std::vector<int> pivots_;
  bool regularized_ = false;
  bool ok_ = false;

  Vector raw_solve(const Vector& b) const;
};

/// Solves Kx = b for symmetric K. Throws SingularError when the factorization
/// breaks down after regularization or the residual bound
/// ||Kx - b|| <= 1e-8 (1 + ||b||) cannot be met.
Vector solve_symmetric_indefinite(const Matrix& K, const Vector& b);

}  // namespace tmiqp::numerics

#endif  // TMIQP_NUMERICS_HPP
