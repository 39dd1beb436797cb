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

#ifndef GTEP_SIMPLEX_HPP
#define GTEP_SIMPLEX_HPP

#include "gtep/lp.hpp"

namespace gtep {

/// Solves the continuous relaxation of `p` (integrality flags are ignored).
///
/// Bounded-variable revised simplex on the logical-augmented form
///   [A  -I] (x, s) = 0,  lo <= (x, s) <= hi,
/// with a sparse LU of the basis and product-form updates between
/// refactorizations. A dual-feasible start (typical after a right-hand-side
/// or bound change) is handled by the dual simplex; everything else goes
/// through a composite phase 1 followed by primal phase 2. Dantzig pricing
/// switches to Bland's rule after `stall_threshold` degenerate pivots.
///
/// `warm` may carry the basis of a previous solve of a problem with the same
/// shape. It is a hint: a basis of the wrong size or a singular one is
/// silently replaced by the slack basis.
template <typename Scalar>
BasicLpSolution<Scalar> solve_lp(const BasicLpProblem<Scalar>& p, const SolverOptions& opts = {},
                                 const Basis* warm = nullptr);

/// Multiplier of row i when every row is written as a >= row (<= rows are
/// negated), so inequality multipliers of an optimal solve are nonnegative.
/// `row_duals` itself is the sensitivity d obj / d b_i.
template <typename Scalar>
Scalar geq_form_dual(const BasicLpProblem<Scalar>& p, const BasicLpSolution<Scalar>& s, int row) {
  return p.row_sense[row] == RowSense::kLessEqual ? -s.row_duals[row] : s.row_duals[row];
}

/// Residual diagnostics of a claimed optimal pair.
template <typename Scalar>
struct LpResiduals {
  Scalar primal = 0;         // max bound/row violation
  Scalar dual = 0;           // max reduced-cost sign violation
  Scalar complementarity = 0;
  Scalar duality_gap = 0;    // |primal objective - dual objective|
  Scalar dual_objective = 0;
};

template <typename Scalar>
LpResiduals<Scalar> lp_residuals(const BasicLpProblem<Scalar>& p, const BasicLpSolution<Scalar>& s);

extern template BasicLpSolution<double> solve_lp(const BasicLpProblem<double>&, const SolverOptions&,
                                                 const Basis*);
extern template BasicLpSolution<long double> solve_lp(const BasicLpProblem<long double>&,
                                                      const SolverOptions&, const Basis*);
extern template LpResiduals<double> lp_residuals(const BasicLpProblem<double>&,
                                                 const BasicLpSolution<double>&);
extern template LpResiduals<long double> lp_residuals(const BasicLpProblem<long double>&,
                                                      const BasicLpSolution<long double>&);

}  // namespace gtep

#endif  // GTEP_SIMPLEX_HPP
