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

#ifndef TMIQP_TOOLS_CLI_HPP
#define TMIQP_TOOLS_CLI_HPP

#include <ostream>

namespace tmiqp::cli {

/// Exit codes of the solve subcommand; other subcommands use 0 and 1.
enum ExitCode { kOk = 0, kError = 1, kSuboptimal = 2, kInfeasible = 3 };

/// Entry point of the tmiqp tool. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tmiqp::cli

#endif  // TMIQP_TOOLS_CLI_HPP
