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

#ifndef TMIQP_RELAXATION_HPP
#define TMIQP_RELAXATION_HPP

#include <optional>
#include <vector>

#include "tmiqp/model.hpp"
#include "tmiqp/qp.hpp"

namespace tmiqp {

/// Per-stage integer decision: either a fixed integer vector or relaxed to
/// the convex hull of the integer set.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(int N) : entries_(static_cast<std::size_t>(N)) {}

  static PartialAssignment relaxed(int N) { return PartialAssignment(N); }
  static PartialAssignment full(const std::vector<IntVector>& values);

  int horizon() const { return static_cast<int>(entries_.size()); }
  bool is_fixed(int k) const { return entries_[k].has_value(); }
  const IntVector& value(int k) const { return *entries_[k]; }
  void fix(int k, IntVector v) { entries_[k] = std::move(v); }
  void relax(int k) { entries_[k].reset(); }

  int fixed_stages() const;
  /// True if every stage fixed here is fixed to the same value in `other`.
  bool is_extended_by(const PartialAssignment& other) const;

  const std::vector<std::optional<IntVector>>& entries() const { return entries_; }

  bool operator==(const PartialAssignment& other) const = default;

 private:
  std::vector<std::optional<IntVector>> entries_;
};

/// Throws std::invalid_argument if `pa` has the wrong length or a fixed
/// vector is not a member of the channel sets.
void check_assignment(const MiocpInstance& inst, const PartialAssignment& pa);

/// The convex relaxation NLP(V): fixed stages are substituted as constants,
/// relaxed stages become continuous v(k) in the channel hull [min, max].
///
/// Stage layout of `qp`: stage 0 holds w(0) = (u(0), v(0) if relaxed) with
/// x(0) = x0 folded into the constants; stages 1..N-1 hold (x(k), w(k));
/// stage N holds x(N) only.
struct RelaxationQp {
  qp::OcpQp qp;
  PartialAssignment pa;
  /// A row without free variables (e.g. a mixed row at k = 0 once x0 and
  /// v(0) are substituted) is violated.
  bool trivially_infeasible = false;
  int N = 0, nx = 0, nu = 0, nv = 0;
  Vector x0;
};

RelaxationQp build_relaxation(const MiocpInstance& inst,
                              const PartialAssignment& pa);

struct RelaxedSolution {
  qp::QpStatus status = qp::QpStatus::IterationLimit;
  double objective = kInf;  // J*(V)
  Trajectory traj;          // z*(V); empty unless Optimal
  double kkt_residual = kInf;
  int iterations = 0;
};

/// `check_convexity` = false skips the reduced-Hessian test. Fixing stages
/// only restricts the relaxation, so a caller that has checked the fully
/// relaxed problem of the same instance may skip it for every extension.
RelaxedSolution solve_qp(const RelaxationQp& relaxation, double tol = 1e-8,
                         int max_iter = 100, bool check_convexity = true);

/// True iff every v(k) component lies within `tol` of a member of its
/// channel set. Requires an Optimal solution.
bool is_integer_feasible(const RelaxedSolution& sol, const MiocpInstance& inst,
                         double tol = 1e-6);

/// v(k) of an integer-feasible solution, rounded to the channel members.
std::vector<IntVector> rounded_integers(const RelaxedSolution& sol,
                                        const MiocpInstance& inst);

}  // namespace tmiqp

#endif  // TMIQP_RELAXATION_HPP
