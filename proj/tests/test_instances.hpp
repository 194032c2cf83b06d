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

#ifndef TMIQP_TESTS_TEST_INSTANCES_HPP
#define TMIQP_TESTS_TEST_INSTANCES_HPP

#include <vector>

#include "tmiqp/builtin.hpp"
#include "tmiqp/relaxation.hpp"

namespace tmiqp::testing {

// Valid but empty: the mixed row asks for u >= 5 while u <= 3.
inline MiocpInstance infeasible_instance(int N = 2) {
  MiocpInstance inst = builtin::illustrative(N, 1.0);
  MixedRow row;
  row.gx = Vector::Zero(1);
  row.gu = Vector::Ones(1);
  row.gv = Vector::Zero(1);
  row.lo = 5.0;
  inst.constraints.mixed.push_back(row);
  return inst;
}

inline PartialAssignment scalar_prefix(int N, const std::vector<int>& values) {
  PartialAssignment pa(N);
  for (std::size_t k = 0; k < values.size(); ++k) pa.fix(static_cast<int>(k), {values[k]});
  return pa;
}

}  // namespace tmiqp::testing

#endif  // TMIQP_TESTS_TEST_INSTANCES_HPP
