// Copyright 2026 The densecode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "densecode/qstate.h"

namespace densecode::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNegative = 1;
inline constexpr int kUsage = 2;

// Runs one command line (without the program name). Reports go to `out`,
// diagnostics to `err`; errors are also printed to `out` as one JSON line
// {"error": kind, "reason": message}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses "a,b,c" into a state. Tokens may be decimals or fractions "p/q".
// When every decimal lies within `snap_tol` of a fraction with denominator
// <= 100 and the snapped values sum to 1, the snapped values are used, so
// "0.333333,0.333333,0.333334" is the uniform qutrit state. snap_tol = 0
// disables snapping. With `normalize` the values are divided by their sum.
SchmidtVector parse_state(const std::string& text, bool normalize = false,
                          double snap_tol = 1e-6);

std::vector<int> parse_int_list(const std::string& text);

}  // namespace densecode::cli
