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

#ifndef TMIQP_DISSIPATIVITY_HPP
#define TMIQP_DISSIPATIVITY_HPP

#include <string>
#include <vector>

#include "tmiqp/model.hpp"

namespace tmiqp {

enum class CertificateStatus { Certified, NotCertified, IndeterminateSingular };

std::string to_string(CertificateStatus s);

/// Quadratic storage x'Px certifying Q + P - A'PA > 0.
struct DissipativityCertificate {
  Matrix P;
  double eps = 0.0;
  double residual_min_eig = 0.0;
  CertificateStatus status = CertificateStatus::NotCertified;
};

/// Default margins {1e-2, 1e-4, 1e-6} * (1 + ||Q||_F).
std::vector<double> default_eps_schedule(const Matrix& Q);

/// Tries each margin in turn: solves P - A'PA = eps I - Q and checks the
/// residual. The linear cost terms never enter. Throws DimensionError when
/// A and Q are not square of equal size.
DissipativityCertificate certify(const Matrix& A, const Matrix& Q,
                                 const std::vector<double>& eps_schedule);
DissipativityCertificate certify(const Matrix& A, const Matrix& Q);

/// Uses the dynamics and the stage-0 state weight of `inst`.
DissipativityCertificate certify(const MiocpInstance& inst);

/// Smallest eigenvalue of Q + P - A'PA.
double verify(const Matrix& A, const Matrix& Q, const Matrix& P);

}  // namespace tmiqp

#endif  // TMIQP_DISSIPATIVITY_HPP
