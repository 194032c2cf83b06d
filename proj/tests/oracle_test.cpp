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


#include "tmiqp/oracle.hpp"

#include "gtest/gtest.h"
#include "test_instances.hpp"
#include "tmiqp/builtin.hpp"

namespace tmiqp {
namespace {

TEST(OracleTest, IllustrativeTwoStepsStaysAtRest) {
  const EnumerationResult r = enumerate_solve(builtin::illustrative(2, 1.0));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.J, 0.0, 1e-6);
  ASSERT_EQ(r.v_seq.size(), 2u);
  EXPECT_EQ(r.v_seq[0], IntVector{0});
  EXPECT_EQ(r.v_seq[1], IntVector{0});
  EXPECT_NEAR(r.traj.u.cwiseAbs().maxCoeff(), 0.0, 1e-5);
  EXPECT_EQ(r.sequences_solved, 9);
}

TEST(OracleTest, IllustrativeOneStepHandSolved) {
  // v = -1 reaches x(1) = 2 with u = 0 at cost 1/2; v = 0 and v = 1 cost more.
  const EnumerationResult r = enumerate_solve(builtin::illustrative(1, 2.0));
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.J, 0.5, 1e-6);
  EXPECT_EQ(r.v_seq[0], IntVector{-1});
  // The bound x(1) <= 2 is active with a zero multiplier, so the interior
  // point only resolves u to about the square root of its tolerance.
  EXPECT_NEAR(r.traj.u(0, 0), 0.0, 1e-3);
}

TEST(OracleTest, EmptyFeasibleSet) {
  const EnumerationResult r = enumerate_solve(testing::infeasible_instance());
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.J, kInf);
}

TEST(OracleTest, LimitIsEnforced) {
  // 3^8 = 6561 sequences.
  const MiocpInstance inst = builtin::illustrative(8, 1.0);
  EXPECT_EQ(sequence_count(inst, 4096), 4097);
  EXPECT_THROW(enumerate_solve(inst, 4096), EnumerationLimitError);
  EXPECT_EQ(sequence_count(builtin::illustrative(3, 1.0), 4096), 27);
}

TEST(OracleTest, StageVectorsAreLexicographic) {
  ConstraintSet cs;
  cs.v_sets = {{0, 1}, {-1, 2}};
  const auto v = stage_vectors(cs);
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v[0], (IntVector{0, -1}));
  EXPECT_EQ(v[1], (IntVector{0, 2}));
  EXPECT_EQ(v[2], (IntVector{1, -1}));
  EXPECT_EQ(v[3], (IntVector{1, 2}));
}

TEST(OracleTest, ReturnedTrajectoryCostsWhatItClaims) {
  for (double x0 : {-2.0, 0.5, 2.0}) {
    const MiocpInstance inst = builtin::illustrative(3, x0);
    const EnumerationResult r = enumerate_solve(inst);
    ASSERT_TRUE(r.feasible);
    EXPECT_NEAR(total_cost(inst, r.traj), r.J, 1e-6) << "x0=" << x0;
  }
}

TEST(OracleTest, NoFeasibleSequenceBeatsTheOptimum) {
  // Every full sequence is a feasible point of its own QP; the oracle is the
  // minimum over them.
  const MiocpInstance inst = builtin::example1(4, 0.3);
  const EnumerationResult r = enumerate_solve(inst);
  ASSERT_TRUE(r.feasible);
  for (int bits = 0; bits < 16; ++bits) {
    std::vector<IntVector> seq;
    for (int k = 0; k < 4; ++k) seq.push_back({(bits >> k) & 1});
    const RelaxedSolution s = solve_qp(build_relaxation(inst, PartialAssignment::full(seq)));
    if (s.status == qp::QpStatus::Optimal) {
      EXPECT_GE(s.objective, r.J - 1e-6);
    }
  }
}

}  // namespace
}  // namespace tmiqp
