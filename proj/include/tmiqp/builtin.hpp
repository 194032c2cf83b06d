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

#ifndef TMIQP_BUILTIN_HPP
#define TMIQP_BUILTIN_HPP

#include <string>
#include <vector>

#include "tmiqp/model.hpp"

namespace tmiqp::builtin {

/// Scalar benchmark
///   min sum u(k)^2 + v(k)^2 / 2
///   x(k+1) = 2 x(k) + u(k) + v(k) - 1,
///   x in [-2, 2], u in [-3, 3], v in {-1, 0, 1}.
MiocpInstance illustrative(int N = 30, double x0 = 2.0);

/// Piecewise-affine system x1+ = +-0.8 x1 + u written with a binary mode v
/// and an auxiliary continuous input x2 = |x1| enforced by six mixed rows.
/// State x = (x1), continuous input u = (u, x2), integer input v in {0, 1}.
/// Stage cost -10 x1 + 100 x1^2 + 10 u + 100 u^2; the last stage uses
/// -1000 as the linear x1 weight.
MiocpInstance example1(int N = 20, double x0 = 1.0, double x_lo = -1.0,
                       double x_hi = 1.0, double u_lo = -0.5, double u_hi = 0.5);

/// Nilpotent shift system x+ = E x + B1 u + B2 v with E the nx x nx upper
/// shift, B1 = e_nx, B2 = ones and stage cost 10u + v + 100u^2 + 100 x'x.
/// u is unconstrained, v in {0, 1}.
MiocpInstance example2(int nx = 3, int N = 20);
MiocpInstance example2(int nx, int N, const Vector& x0);

/// Shift matrix [[0, I], [0, 0]] of size n.
Matrix shift_matrix(int n);

std::vector<std::string> names();

/// Looks up a builtin by name ("illustrative", "example1", "example2").
/// `nx` only applies to example2. Throws std::invalid_argument.
MiocpInstance by_name(const std::string& name, int N, int nx = 3);

}  // namespace tmiqp::builtin

#endif  // TMIQP_BUILTIN_HPP
