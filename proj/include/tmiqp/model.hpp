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

#ifndef TMIQP_MODEL_HPP
#define TMIQP_MODEL_HPP

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tmiqp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = std::vector<int>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x(k+1) = A x(k) + B1 u(k) + B2 v(k) + c.
///
/// The affine offset c defaults to zero; it is needed for models such as
/// x(k+1) = 2x(k) + u(k) + v(k) - 1.
struct LinearDynamics {
  Matrix A;
  Matrix B1;
  Matrix B2;
  Vector c;

  int nx() const { return static_cast<int>(A.rows()); }
  int nu() const { return static_cast<int>(B1.cols()); }
  int nv() const { return static_cast<int>(B2.cols()); }

  Vector step(const Vector& x, const Vector& u, const Vector& v) const;
};

/// l(x, u, v) = x'Qx + [u;v]'R[u;v] + q'x + r'[u;v] + constant.
///
/// Q and R are symmetrized on construction. Neither has to be definite.
/// A terminal cost uses Q, q and constant only; its R and r are empty.
struct StageCost {
  Matrix Q;
  Matrix R;
  Vector q;
  Vector r;
  double constant = 0.0;

  StageCost() = default;
  StageCost(Matrix Q_, Matrix R_, Vector q_, Vector r_, double constant_ = 0.0);

  static StageCost terminal(Matrix Q_, Vector q_, double constant_ = 0.0);
  static StageCost zero(int nx, int nu, int nv);

  double evaluate(const Vector& x, const Vector& u, const Vector& v) const;
  double evaluate_terminal(const Vector& x) const;

  bool operator==(const StageCost& other) const;
};

/// lo <= gx'x + gu'u + gv'v <= hi, imposed at every stage k = 0..N-1.
struct MixedRow {
  Vector gx;
  Vector gu;
  Vector gv;
  double lo = -kInf;
  double hi = kInf;

  bool operator==(const MixedRow& other) const;
};

struct ConstraintSet {
  Vector x_lo, x_hi;
  Vector u_lo, u_hi;
  /// One strictly sorted, nonempty integer set per integer channel.
  std::vector<IntVector> v_sets;
  std::vector<MixedRow> mixed;

  int channel_min(int j) const { return v_sets[j].front(); }
  int channel_max(int j) const { return v_sets[j].back(); }
  bool channel_contains(int j, int value) const;

  bool operator==(const ConstraintSet& other) const;
};

struct Box {
  Vector lo, hi;
  bool operator==(const Box& other) const;
};

struct MiocpInstance {
  LinearDynamics dyn;
  std::vector<StageCost> stage_costs;  // one per stage 0..N-1
  StageCost terminal_cost;             // acts on x(N)
  ConstraintSet constraints;
  int N = 0;
  Vector x0;
  std::optional<Box> x0_set;

  int nx() const { return dyn.nx(); }
  int nu() const { return dyn.nu(); }
  int nv() const { return dyn.nv(); }

  /// Number of distinct integer vectors per stage (product of channel sizes).
  long long stage_cardinality() const;

  bool operator==(const MiocpInstance& other) const;
};

/// Rows are time steps: x is (N+1) x nx, u is N x nu, v is N x nv.
struct Trajectory {
  Matrix x;
  Matrix u;
  Matrix v;

  int horizon() const { return static_cast<int>(u.rows()); }
};

struct Violation {
  std::string tag;
  std::string detail;
};

namespace violation_tag {
inline constexpr const char* kDimensionMismatch = "dimension mismatch";
inline constexpr const char* kEmptyIntegerSet = "empty integer set";
inline constexpr const char* kUnsortedIntegerSet = "unsorted integer set";
inline constexpr const char* kInvertedBounds = "inverted bounds";
inline constexpr const char* kNonFinite = "non-finite entry";
inline constexpr const char* kBadHorizon = "invalid horizon";
inline constexpr const char* kInitialState = "initial state infeasible";
}  // namespace violation_tag

/// Every dimension and bound inconsistency of `inst`. Empty means valid.
std::vector<Violation> validate(const MiocpInstance& inst);

/// Rolls the dynamics forward from inst.x0. Feasibility is not checked.
/// u_seq is N x nu and v_seq is N x nv; relaxed (fractional) v is allowed.
Trajectory simulate(const MiocpInstance& inst, const Matrix& u_seq,
                    const Matrix& v_seq);

/// Sum of stage costs over k = 0..N-1 plus the terminal cost on x(N).
double total_cost(const MiocpInstance& inst, const Trajectory& traj);

/// Copy of `inst` with horizon `N`. Uniform stage costs are replicated;
/// otherwise the last stage keeps its own cost and earlier stages reuse the
/// leading costs of `inst`.
MiocpInstance with_horizon(const MiocpInstance& inst, int N);

MiocpInstance with_initial_state(const MiocpInstance& inst, const Vector& x0);

}  // namespace tmiqp

#endif  // TMIQP_MODEL_HPP
