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

#ifndef TMIQP_IO_HPP
#define TMIQP_IO_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tmiqp/bnb.hpp"
#include "tmiqp/model.hpp"

namespace tmiqp::io {

/// Malformed instance or guess document. The message names the offending
/// field (e.g. "stage_costs[3].R") or the line of a syntax error.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

/// Instance document:
///   {"A": [[..]], "B1": [[..]], "B2": [[..]], "c": [..], "N": int, "x0": [..],
///    "stage_cost": {...} | "stage_costs": [{...}], "terminal_cost": {...},
///    "x_bounds": [[lo..], [hi..]], "u_bounds": ..., "v_sets": [[..]],
///    "mixed": [{"gx", "gu", "gv", "lo", "hi"}], "x0_set": {"lo", "hi"},
///    "guesses": [{"V": [[..] | null], "w": num}]}
/// Bounds accept "inf" / "-inf". Missing bounds are unbounded, missing
/// "c", "mixed" and "terminal_cost" are zero or empty.
MiocpInstance instance_from_json(const Json& j);
Json instance_to_json(const MiocpInstance& inst);

bnb::GuessSet guesses_from_json(const Json& j, int N);
Json guesses_to_json(const bnb::GuessSet& guesses);

Json trajectory_to_json(const Trajectory& traj);

struct InstanceFile {
  MiocpInstance instance;
  std::optional<bnb::GuessSet> guesses;
};

/// Parses a document, reporting syntax errors with their line number.
Json parse_json(const std::string& text);

/// Throws ParseError on unreadable files or malformed content; the instance
/// is checked with validate().
InstanceFile load_instance(const std::string& path);
bnb::GuessSet load_guesses(const std::string& path, int N);

}  // namespace tmiqp::io

#endif  // TMIQP_IO_HPP
