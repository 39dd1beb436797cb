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

#ifndef GTEP_BENDERS_HPP
#define GTEP_BENDERS_HPP

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtep/backend.hpp"
#include "gtep/cut.hpp"
#include "gtep/formulation.hpp"

namespace gtep {

// A (year, scenario) solve that did not reach optimality.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, int year, std::string scenario)
      : std::runtime_error(what), year(year), scenario(std::move(scenario)) {}
  int year;
  std::string scenario;
};

// Throws std::invalid_argument unless every anchor has lambda and x_hat of equal size.
Cut make_cut(int iteration, int scenario, std::vector<CutAnchor> anchors);

struct IterationRecord {
  int iteration = 0;
  double z_lb = 0, z_ub = 0, rel_gap = 0;
  double z_gtep = 0;  // upper-bound candidate of this iteration
  double master_ms = 0, subproblems_ms = 0;
  int non_optimal_subproblems = 0;
};

struct BendersState {
  int iteration = 0;
  double eps = 1e-3;
  int max_iter = 100;
  std::vector<Cut> cuts;  // append-only
  double z_lb = -kInfinity, z_ub = kInfinity;
  InvestmentPlan x_best;
  int best_iteration = 0;
  std::vector<IterationRecord> trace;
};

// (z_UB - z_LB) / |z_UB|; 0 when both are 0.
double relative_gap(double z_lb, double z_ub);

// One bound update. z_GTEP = investment + sum_y sum_w pb_w sub_costs[y][w];
// z_UB only moves on strict improvement, which also replaces x_BEST. z_LB
// never decreases.
BendersState update_bounds(BendersState s, double z_lb_i, double investment,
                           const std::vector<std::vector<double>>& sub_costs, const std::vector<double>& pb,
                           const InvestmentPlan& x_i);

struct BendersConfig {
  double eps = 1e-3;
  int max_iter = 100;
  int parallelism = 1;
  BuildOptions build;   // relax_uc is forced on for the iterations
  bool final_pass = true;  // integer-UC dispatch at x_BEST after convergence
  SolverOptions lp;
  SolverOptions master;
  SolverOptions final_mip;
  std::shared_ptr<const SolverBackend> backend;  // null: default_backend()
  BendersConfig() {
    final_mip.mip_gap = 5e-3;
    final_mip.node_limit = 500;
  }
};

// Outcome of one (year, scenario) dispatch.
struct OperationResult {
  int year = 0, scenario = 0;
  FirstStageRefs x;
  OperationRefs ops;
  Eigen::VectorXd values;
  std::shared_ptr<const std::vector<std::string>> col_names;  // names of `values`
  double objective = 0;
  bool integer_uc = false;
  bool proven_optimal = true;  // false when the final-pass MILP stopped on a node limit
};

struct BendersResult {
  bool converged = false;
  BendersState state;
  double investment = 0;
  double relaxed_total = 0;  // z_UB
  std::vector<std::vector<double>> relaxed_costs;  // [y][w] at x_BEST
  bool final_pass = false;
  double final_total = 0;    // investment + expected final-pass cost
  double final_gap = 0;      // (final_total - relaxed_total) / relaxed_total
  std::vector<std::vector<OperationResult>> operations;  // [y][w], final pass or relaxed
  double wall_ms = 0;
};

BendersResult run_benders(const ModelData& d, const BendersConfig& cfg = {});

// iter,z_LB,z_UB,rel_gap,master_ms,subproblems_ms
void write_convergence_csv(const BendersState& s, std::ostream& out);

// Dispatch every (y, w) at a fixed plan; used by the final pass and plan evaluation.
std::vector<std::vector<OperationResult>> dispatch_plan(const ModelData& d, const InvestmentPlan& plan,
                                                        bool integer_uc, const BendersConfig& cfg);

}  // namespace gtep

#endif  // GTEP_BENDERS_HPP
