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

#ifndef GTEP_MILP_HPP
#define GTEP_MILP_HPP

#include <stdexcept>

#include "gtep/lp.hpp"

namespace gtep {

/// LP-based branch and bound. Best-bound node selection with most-fractional
/// branching; until the first incumbent exists the search plunges depth-first.
/// Each child LP is warm-started from its parent's basis.
///
/// `hint`, when given, is a candidate solution: its integer part is fixed and
/// the continuous part re-solved; a feasible result seeds the incumbent.
MilpSolution solve_milp(const LpProblem& p, const SolverOptions& opts = {},
                        const Eigen::VectorXd* hint = nullptr);

class EnumerationSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive oracle for tests: every assignment of the integer columns is
/// fixed and the remaining LP solved. At most 20 integer columns, each with a
/// finite range of at most 4, and at most 2^20 assignments in total.
MilpSolution enumerate_oracle(const LpProblem& p, const SolverOptions& opts = {});

}  // namespace gtep

#endif  // GTEP_MILP_HPP
