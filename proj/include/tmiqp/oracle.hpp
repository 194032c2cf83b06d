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

#ifndef TMIQP_ORACLE_HPP
#define TMIQP_ORACLE_HPP

#include <stdexcept>
#include <vector>

#include "tmiqp/model.hpp"

namespace tmiqp {

class EnumerationLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct EnumerationResult {
  bool feasible = false;
  double J = kInf;
  Trajectory traj;
  std::vector<IntVector> v_seq;
  long long sequences_solved = 0;
};

/// Number of full integer sequences of `inst`, saturating at `cap + 1`.
long long sequence_count(const MiocpInstance& inst, long long cap);

/// All stage vectors of the product of channel sets, in lexicographic order.
std::vector<IntVector> stage_vectors(const ConstraintSet& cs);

/// Solves the relaxation for every full integer sequence and keeps the
/// cheapest feasible one. Ties within 1e-9 go to the lexicographically
/// smallest sequence. Throws EnumerationLimitError when more than `limit`
/// sequences exist.
EnumerationResult enumerate_solve(const MiocpInstance& inst, long long limit = 4096);

}  // namespace tmiqp

#endif  // TMIQP_ORACLE_HPP
