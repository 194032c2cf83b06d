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


#include "tmiqp/dissipativity.hpp"

#include "gtest/gtest.h"
#include "tmiqp/builtin.hpp"

namespace tmiqp {
namespace {

Matrix scalar(double a) { return Matrix::Constant(1, 1, a); }

TEST(CertifyTest, UnstableScalarWithoutStateCost) {
  const auto c = certify(scalar(2.0), scalar(0.0));
  EXPECT_EQ(c.status, CertificateStatus::Certified);
  EXPECT_DOUBLE_EQ(c.eps, 1e-2);
  EXPECT_NEAR(c.P(0, 0), -c.eps / 3.0, 1e-12);
  EXPECT_NEAR(c.residual_min_eig, c.eps, 1e-10);
}

class ShiftTest : public ::testing::TestWithParam<int> {};

TEST_P(ShiftTest, MatchesNilpotentSeries) {
  const int n = GetParam();
  const Matrix E = builtin::shift_matrix(n);
  const Matrix Q = 100.0 * Matrix::Identity(n, n);
  const auto c = certify(E, Q);
  ASSERT_EQ(c.status, CertificateStatus::Certified);
  const Matrix rhs = c.eps * Matrix::Identity(n, n) - Q;
  Matrix series = Matrix::Zero(n, n);
  Matrix Ek = Matrix::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    series += Ek.transpose() * rhs * Ek;
    Ek = Ek * E;
  }
  EXPECT_LE((c.P - series).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_GE(c.residual_min_eig, 0.5 * c.eps);
}

INSTANTIATE_TEST_SUITE_P(Sizes, ShiftTest, ::testing::Values(3, 30));

TEST(CertifyTest, IdentityIsIndeterminate) {
  EXPECT_EQ(certify(scalar(1.0), scalar(0.0)).status,
            CertificateStatus::IndeterminateSingular);
  EXPECT_EQ(certify(Matrix::Identity(2, 2), Matrix::Identity(2, 2)).status,
            CertificateStatus::IndeterminateSingular);
}

TEST(CertifyTest, DimensionMismatch) {
  EXPECT_THROW(certify(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), DimensionError);
  EXPECT_THROW(certify(Matrix::Zero(2, 3), Matrix::Zero(2, 2)), DimensionError);
}

TEST(CertifyTest, ResidualMatchesMargin) {
  const Matrix A = (Matrix(2, 2) << 0.5, 1.0, 0.0, 1.5).finished();
  const Matrix Q = (Matrix(2, 2) << 1.0, 0.2, 0.2, -0.5).finished();
  const auto c = certify(A, Q);
  ASSERT_EQ(c.status, CertificateStatus::Certified);
  const double s = 1.0 + Q.norm();
  EXPECT_NEAR(verify(A, Q, c.P), c.eps, 1e-6 * s);
  EXPECT_NEAR(c.residual_min_eig, verify(A, Q, c.P), 1e-12);
}

TEST(CertifyTest, InstanceOverloadUsesDynamicsAndStateWeight) {
  const MiocpInstance inst = builtin::example2(3, 5);
  const auto a = certify(inst);
  const auto b = certify(inst.dyn.A, inst.stage_costs[0].Q);
  EXPECT_EQ(a.status, CertificateStatus::Certified);
  EXPECT_EQ(a.P, b.P);
  // Linear cost terms never enter.
  MiocpInstance shifted = inst;
  for (auto& sc : shifted.stage_costs) sc.q.setConstant(-50.0);
  EXPECT_EQ(certify(shifted).P, a.P);
}

TEST(VerifyTest, Examples) {
  const auto c = certify(scalar(0.8), scalar(100.0), {1.0});
  EXPECT_NEAR(verify(scalar(0.8), scalar(100.0), c.P), 1.0, 1e-8);
  EXPECT_DOUBLE_EQ(verify(scalar(3.0), scalar(1.0), scalar(0.0)), 1.0);
  EXPECT_DOUBLE_EQ(verify(scalar(3.0), scalar(-1.0), scalar(0.0)), -1.0);
}

TEST(EpsScheduleTest, RelativeToCostNorm) {
  const auto s = default_eps_schedule(scalar(-3.0));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], 4e-2);
  EXPECT_DOUBLE_EQ(s[2], 4e-6);
}

}  // namespace
}  // namespace tmiqp
