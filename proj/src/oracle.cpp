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

#include <string>

#include "tmiqp/relaxation.hpp"

namespace tmiqp {

long long sequence_count(const MiocpInstance& inst, long long cap) {
  const long long per_stage = inst.stage_cardinality();
  long long total = 1;
  for (int k = 0; k < inst.N; ++k) {
    if (per_stage != 0 && total > cap / per_stage) {
      return cap + 1;
    }
    total *= per_stage;
  }
  return total;
}

std::vector<IntVector> stage_vectors(const ConstraintSet& cs) {
  std::vector<IntVector> out{{}};
  for (const auto& channel : cs.v_sets) {
    std::vector<IntVector> next;
    for (const auto& prefix : out) {
      for (int value : channel) {
        IntVector v = prefix;
        v.push_back(value);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

EnumerationResult enumerate_solve(const MiocpInstance& inst, long long limit) {
  const long long count = sequence_count(inst, limit);
  if (count > limit) {
    throw EnumerationLimitError("instance has more than " + std::to_string(limit) +
                                " integer sequences");
  }
  const std::vector<IntVector> choices = stage_vectors(inst.constraints);
  const int N = inst.N;
  const int base = static_cast<int>(choices.size());

  EnumerationResult best;
  // Odometer over stage choices; stage 0 is the most significant digit so the
  // visiting order is lexicographic.
  std::vector<int> digits(static_cast<std::size_t>(N), 0);
  for (long long s = 0; s < count; ++s) {
    std::vector<IntVector> seq(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
      seq[k] = choices[digits[k]];
    }
    const RelaxedSolution sol =
        solve_qp(build_relaxation(inst, PartialAssignment::full(seq)));
    ++best.sequences_solved;
    if (sol.status == qp::QpStatus::Optimal && sol.objective < best.J - 1e-9) {
      best.feasible = true;
      best.J = sol.objective;
      best.traj = sol.traj;
      best.v_seq = seq;
    }
    for (int k = N - 1; k >= 0; --k) {
      if (++digits[k] < base) {
        break;
      }
      digits[k] = 0;
    }
  }
  return best;
}

}  // namespace tmiqp
