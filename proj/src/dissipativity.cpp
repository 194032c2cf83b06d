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

#include "tmiqp/numerics.hpp"

namespace tmiqp {

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Certified:
      return "certified";
    case CertificateStatus::NotCertified:
      return "not certified";
    case CertificateStatus::IndeterminateSingular:
      return "indeterminate (singular)";
  }
  return "unknown";
}

std::vector<double> default_eps_schedule(const Matrix& Q) {
  const double s = 1.0 + Q.norm();
  return {1e-2 * s, 1e-4 * s, 1e-6 * s};
}

double verify(const Matrix& A, const Matrix& Q, const Matrix& P) {
  const Matrix M = Q + P - A.transpose() * P * A;
  return numerics::min_eigenvalue_symmetric(0.5 * (M + M.transpose()));
}

DissipativityCertificate certify(const Matrix& A, const Matrix& Q,
                                 const std::vector<double>& eps_schedule) {
  if (A.rows() != A.cols() || Q.rows() != Q.cols() || A.rows() != Q.rows()) {
    throw DimensionError("certify: A and Q must be square of equal size");
  }
  const Matrix Qs = 0.5 * (Q + Q.transpose());
  const auto n = A.rows();
  DissipativityCertificate out;
  out.status = CertificateStatus::IndeterminateSingular;
  bool solved_any = false;
  for (double eps : eps_schedule) {
    numerics::SteinSolution stein;
    try {
      stein = numerics::solve_stein(A, eps * Matrix::Identity(n, n) - Qs);
    } catch (const numerics::SingularError&) {
      continue;
    }
    const double residual = verify(A, Qs, stein.P);
    if (!solved_any || residual > out.residual_min_eig) {
      out.P = stein.P;
      out.eps = eps;
      out.residual_min_eig = residual;
    }
    solved_any = true;
    if (residual > 0.0) {
      out.status = CertificateStatus::Certified;
      out.P = stein.P;
      out.eps = eps;
      out.residual_min_eig = residual;
      return out;
    }
    out.status = CertificateStatus::NotCertified;
  }
  return out;
}

DissipativityCertificate certify(const Matrix& A, const Matrix& Q) {
  return certify(A, Q, default_eps_schedule(Q));
}

DissipativityCertificate certify(const MiocpInstance& inst) {
  if (inst.stage_costs.empty()) {
    throw DimensionError("certify: instance has no stage costs");
  }
  return certify(inst.dyn.A, inst.stage_costs.front().Q);
}

}  // namespace tmiqp
