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

#ifndef GTEP_CUT_HPP
#define GTEP_CUT_HPP

#include <vector>

namespace gtep {

// Linearization of one year's operating cost around the plan it was built at.
struct CutAnchor {
  double z = 0;                // subproblem optimum z_{y,w}
  std::vector<double> x_hat;   // first-stage values x_y at that solve
  std::vector<double> lambda;  // fixing-row duals, aligned with x_hat
};

// Optimality cut theta_w >= sum_y [ z_y + lambda_y' (x_y - x_hat_y) ].
struct Cut {
  int iteration = 0;
  int scenario = 0;
  std::vector<CutAnchor> years;  // indexed by year position

  // Right-hand side of the cut evaluated at x (one vector per year).
  double evaluate(const std::vector<std::vector<double>>& x) const;
  // Constant term sum_y (z_y - lambda_y' x_hat_y).
  double constant() const;
};

}  // namespace gtep

#endif  // GTEP_CUT_HPP
