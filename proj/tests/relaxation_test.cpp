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

#include <random>

#include "gtest/gtest.h"
#include "tmiqp/builtin.hpp"

namespace tmiqp {
namespace {

using qp::QpStatus;

PartialAssignment fixed_scalar(const std::vector<int>& values) {
  std::vector<IntVector> v;
  for (int x : values) v.push_back({x});
  return PartialAssignment::full(v);
}

TEST(BuildRelaxationTest, VariableCounts) {
  const MiocpInstance inst = builtin::illustrative(2, 1.0);
  // x(0) is folded into constants: w(0), (x(1), w(1)), x(2).
  const RelaxationQp relaxed = build_relaxation(inst, PartialAssignment::relaxed(2));
  EXPECT_EQ(relaxed.qp.num_vars(), 2 + 3 + 1);
  const RelaxationQp fixed = build_relaxation(inst, fixed_scalar({0, 0}));
  EXPECT_EQ(fixed.qp.num_vars(), 1 + 2 + 1);
  EXPECT_FALSE(fixed.trivially_infeasible);
}

TEST(BuildRelaxationTest, RejectsBadAssignments) {
  const MiocpInstance inst = builtin::illustrative(2, 1.0);
  EXPECT_THROW(build_relaxation(inst, PartialAssignment::relaxed(3)),
               std::invalid_argument);
  EXPECT_THROW(build_relaxation(inst, fixed_scalar({0, 2})), std::invalid_argument);
}

TEST(BuildRelaxationTest, Example1ModeOneRowsForceEqualAuxiliary) {
  // With v = 1 substituted, the mixed rows require x2 = x1 and 0 <= x1 <= 1.
  MiocpInstance inst = builtin::example1(3, 0.5);
  PartialAssignment pa(3);
  pa.fix(1, {1});
  const RelaxationQp r = build_relaxation(inst, pa);
  const qp::QpStage& st = r.qp.stages()[1];
  auto satisfied = [&](double x1, double x2) {
    Vector w = Vector::Zero(st.nw());
    w(1) = x2;
    const Vector lhs = st.Cx * Vector::Constant(1, x1) + st.Cw * w;
    return ((lhs - st.d).array() <= 1e-12).all();
  };
  EXPECT_TRUE(satisfied(0.5, 0.5));
  EXPECT_TRUE(satisfied(0.0, 0.0));
  EXPECT_FALSE(satisfied(0.5, 0.4));
  EXPECT_FALSE(satisfied(0.5, -0.5));
  EXPECT_FALSE(satisfied(-0.5, -0.5));
}

TEST(BuildRelaxationTest, ViolatedConstantRowAtStageZero) {
  // v(0) = 0 requires x1(0) <= 0, which x0 = 0.5 violates.
  const MiocpInstance inst = builtin::example1(3, 0.5);
  PartialAssignment pa(3);
  pa.fix(0, {0});
  const RelaxationQp r = build_relaxation(inst, pa);
  EXPECT_TRUE(r.trivially_infeasible);
  EXPECT_EQ(solve_qp(r).status, QpStatus::Infeasible);
}

TEST(SolveQpTest, StayingAtSteadyStateIsFree) {
  const MiocpInstance inst = builtin::illustrative(2, 1.0);
  const RelaxedSolution sol = solve_qp(build_relaxation(inst, fixed_scalar({0, 0})));
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_NEAR(sol.objective, 0.0, 1e-8);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(sol.traj.u(k, 0), 0.0, 1e-6);
  for (int k = 0; k <= 2; ++k) EXPECT_NEAR(sol.traj.x(k, 0), 1.0, 1e-6);
  EXPECT_LE(sol.kkt_residual, 1e-7);
}

TEST(SolveQpTest, ActiveStateBound) {
  // x(1) = 4 + u must be <= 2, so u = -2 and J = 4 + 1/2.
  const MiocpInstance inst = builtin::illustrative(1, 2.0);
  const RelaxedSolution sol = solve_qp(build_relaxation(inst, fixed_scalar({1})));
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_NEAR(sol.objective, 4.5, 1e-7);
  EXPECT_NEAR(sol.traj.u(0, 0), -2.0, 1e-6);
  EXPECT_NEAR(sol.traj.x(1, 0), 2.0, 1e-6);
}

TEST(SolveQpTest, UnreachableBoxIsInfeasible) {
  MiocpInstance inst = builtin::illustrative(1, 2.0);
  inst.constraints.u_lo(0) = 0.5;
  inst.constraints.u_hi(0) = 1.0;
  // x(1) = 3 + u + v >= 2.5 for every v in [-1, 1].
  const RelaxedSolution sol = solve_qp(build_relaxation(inst, PartialAssignment(1)));
  EXPECT_EQ(sol.status, QpStatus::Infeasible);
}

TEST(SolveQpTest, ObjectiveMatchesTrajectoryCost) {
  for (const MiocpInstance& inst :
       {builtin::illustrative(5, 2.0), builtin::example1(6, 1.0),
        builtin::example2(3, 6)}) {
    const RelaxedSolution sol =
        solve_qp(build_relaxation(inst, PartialAssignment::relaxed(inst.N)));
    ASSERT_EQ(sol.status, QpStatus::Optimal);
    EXPECT_NEAR(sol.objective, total_cost(inst, sol.traj),
                1e-7 * (1.0 + std::abs(sol.objective)));
  }
}

TEST(SolveQpTest, FullyFixedSolutionReSimulates) {
  const MiocpInstance inst = builtin::illustrative(4, 2.0);
  const RelaxedSolution sol = solve_qp(build_relaxation(inst, fixed_scalar({-1, -1, 0, 0})));
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  const Trajectory t = simulate(inst, sol.traj.u, sol.traj.v);
  EXPECT_LE((t.x - sol.traj.x).cwiseAbs().maxCoeff(), 1e-6);
}

// Enumerates every full assignment of a single-channel instance.
std::vector<std::vector<int>> all_sequences(const IntVector& set, int N) {
  std::vector<std::vector<int>> out{{}};
  for (int k = 0; k < N; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      for (int v : set) {
        auto s = prefix;
        s.push_back(v);
        next.push_back(s);
      }
    }
    out = std::move(next);
  }
  return out;
}

TEST(SolveQpTest, FullRelaxationBoundsEveryAssignment) {
  for (double x0 : {-2.0, 0.0, 2.0}) {
    const MiocpInstance inst = builtin::illustrative(3, x0);
    const RelaxedSolution root = solve_qp(build_relaxation(inst, PartialAssignment(3)));
    ASSERT_EQ(root.status, QpStatus::Optimal);
    for (const auto& seq : all_sequences({-1, 0, 1}, 3)) {
      const RelaxedSolution leaf = solve_qp(build_relaxation(inst, fixed_scalar(seq)));
      if (leaf.status == QpStatus::Optimal) {
        EXPECT_LE(root.objective, leaf.objective + 1e-6);
      } else {
        EXPECT_EQ(leaf.status, QpStatus::Infeasible);
      }
    }
  }
}

TEST(SolveQpTest, MonotoneUnderExtension) {
  std::mt19937_64 rng(21);
  const MiocpInstance inst = builtin::example1(6, 0.3);
  std::uniform_int_distribution<int> coin(0, 1);
  int compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    PartialAssignment a(6), b(6);
    for (int k = 0; k < 6; ++k) {
      const int value = coin(rng);
      if (coin(rng)) {
        a.fix(k, {value});
        b.fix(k, {value});
      } else if (coin(rng)) {
        b.fix(k, {value});
      }
    }
    ASSERT_TRUE(a.is_extended_by(b));
    const RelaxedSolution sa = solve_qp(build_relaxation(inst, a));
    const RelaxedSolution sb = solve_qp(build_relaxation(inst, b));
    if (sa.status == QpStatus::Infeasible) {
      EXPECT_EQ(sb.status, QpStatus::Infeasible);
    }
    if (sa.status == QpStatus::Optimal && sb.status == QpStatus::Optimal) {
      EXPECT_GE(sb.objective, sa.objective - 1e-6);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(IntegerFeasibilityTest, ToleranceAndRounding) {
  const MiocpInstance inst = builtin::example1(2, 0.5);
  RelaxedSolution sol;
  sol.status = QpStatus::Optimal;
  sol.traj.v = Matrix(2, 1);
  sol.traj.v << 1.0 - 1e-9, 0.0;
  EXPECT_TRUE(is_integer_feasible(sol, inst));
  EXPECT_EQ(rounded_integers(sol, inst)[0][0], 1);
  sol.traj.v(1, 0) = 0.5;
  EXPECT_FALSE(is_integer_feasible(sol, inst));
  sol.status = QpStatus::Infeasible;
  sol.traj.v(1, 0) = 0.0;
  EXPECT_FALSE(is_integer_feasible(sol, inst));
}

TEST(IntegerFeasibilityTest, FullyFixedIsIntegerFeasible) {
  const MiocpInstance inst = builtin::illustrative(3, 1.0);
  const RelaxedSolution sol = solve_qp(build_relaxation(inst, fixed_scalar({0, 1, -1})));
  ASSERT_EQ(sol.status, QpStatus::Optimal);
  EXPECT_TRUE(is_integer_feasible(sol, inst));
}

TEST(PartialAssignmentTest, Extension) {
  PartialAssignment a(3), b(3);
  a.fix(0, {1});
  b.fix(0, {1});
  b.fix(2, {0});
  EXPECT_TRUE(a.is_extended_by(b));
  EXPECT_FALSE(b.is_extended_by(a));
  EXPECT_EQ(b.fixed_stages(), 2);
  b.fix(0, {0});
  EXPECT_FALSE(a.is_extended_by(b));
}

}  // namespace
}  // namespace tmiqp
