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

#include "tmiqp/guessgen.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace tmiqp::guessgen {

bnb::GuessSet plateau_guesses(const IntVector& v_bar, int N,
                              const std::vector<GuessTemplate>& templates) {
  bnb::GuessSet out;
  if (templates.empty()) {
    out.add(PartialAssignment::full(std::vector<IntVector>(N, v_bar)), 1.0);
    return out;
  }
  for (const auto& t : templates) {
    const int fixed = static_cast<int>(t.entry.size() + t.leave.size());
    if (fixed > 0 && fixed >= N) {
      throw std::invalid_argument("template of length " + std::to_string(fixed) +
                                  " does not fit horizon " + std::to_string(N));
    }
    std::vector<IntVector> seq(N, v_bar);
    std::copy(t.entry.begin(), t.entry.end(), seq.begin());
    std::copy(t.leave.begin(), t.leave.end(), seq.end() - t.leave.size());
    out.add(PartialAssignment::full(seq), t.weight);
  }
  return out;
}

std::vector<GuessTemplate> table1_templates() {
  auto ones = [](int n) { return std::vector<IntVector>(n, IntVector{1}); };
  return {
      {ones(2), {}, 1.0},      {ones(3), {}, 2.0},      {ones(3), ones(1), 3.0},
      {ones(3), ones(2), 4.0}, {ones(3), ones(3), 3.0}, {ones(3), ones(4), 2.0},
  };
}

std::vector<PartialAssignment> tail_guesses(const IntVector& v_bar, int N,
                                            const std::vector<int>& k_hat_list) {
  std::vector<PartialAssignment> out;
  for (int k_hat : k_hat_list) {
    if (k_hat < 0 || k_hat >= N) {
      throw std::invalid_argument("tail start " + std::to_string(k_hat) +
                                  " outside [0, " + std::to_string(N) + ")");
    }
    PartialAssignment pa(N);
    for (int k = k_hat; k < N; ++k) {
      pa.fix(k, v_bar);
    }
    out.push_back(std::move(pa));
  }
  return out;
}

double dominant_weight(const std::vector<double>& W) {
  if (W.empty()) {
    throw std::invalid_argument("dominant_weight of an empty weight set");
  }
  return 4.0 * *std::max_element(W.begin(), W.end());
}

double max_base_weight(bnb::Strategy strategy, int N) {
  // Depth-first weights range over 0..N, breadth-first over N..0. The hybrid
  // strategy starts depth-first.
  (void)strategy;
  return N;
}

}  // namespace tmiqp::guessgen
