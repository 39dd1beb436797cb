// Copyright 2026 The gtep Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GTEP_MPS_HPP
#define GTEP_MPS_HPP

#include <iosfwd>

#include "gtep/lp.hpp"

namespace gtep {

// Fixed-format MPS. Column and row labels are replaced by generated
// 8-character names (C0000001, R0000001) because model labels are long; a
// comment block at the top maps them back. Numbers are printed in at most 12
// characters, so coefficients lose precision beyond ~10 significant digits.
void write_mps(const LpProblem& p, std::ostream& out, const std::string& name = "GTEP");

// Reads what write_mps writes (and other whitespace-separated MPS without
// RANGES). Throws std::runtime_error on malformed input.
LpProblem read_mps(std::istream& in);

}  // namespace gtep

#endif  // GTEP_MPS_HPP
