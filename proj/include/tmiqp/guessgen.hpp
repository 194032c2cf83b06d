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

#ifndef TMIQP_GUESSGEN_HPP
#define TMIQP_GUESSGEN_HPP

#include <vector>

#include "tmiqp/bnb.hpp"

namespace tmiqp::guessgen {

/// A full guess [entry..., v_bar repeated, leave...] with weight `weight`.
struct GuessTemplate {
  std::vector<IntVector> entry;
  std::vector<IntVector> leave;
  double weight = 1.0;
};

/// Instantiates every template for horizon N. An empty template list yields
/// the pure plateau with weight 1. Throws std::invalid_argument when a
/// template leaves no room for the plateau (entry + leave >= N, except for
/// the empty template).
bnb::GuessSet plateau_guesses(const IntVector& v_bar, int N,
                              const std::vector<GuessTemplate>& templates);

/// Six entry/leave patterns around the v = 0 plateau for the piecewise
/// affine benchmark: [1,1,0..0] w=1, [1,1,1,0..0] w=2, [1,1,1,0..0,1] w=3,
/// [1,1,1,0..0,1,1] w=4, [1,1,1,0..0,1,1,1] w=3, [1,1,1,0..0,1,1,1,1] w=2.
std::vector<GuessTemplate> table1_templates();

/// Relaxed for k < k_hat, fixed to v_bar for k >= k_hat; one guess per k_hat.
/// Throws std::invalid_argument when k_hat is negative or >= N.
std::vector<PartialAssignment> tail_guesses(const IntVector& v_bar, int N,
                                            const std::vector<int>& k_hat_list);

/// 4 * max(W). Throws std::invalid_argument on empty W.
double dominant_weight(const std::vector<double>& W);

/// Largest default-strategy base weight on a tree of horizon N.
double max_base_weight(bnb::Strategy strategy, int N);

}  // namespace tmiqp::guessgen

#endif  // TMIQP_GUESSGEN_HPP
