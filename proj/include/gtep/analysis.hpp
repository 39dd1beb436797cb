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

#ifndef GTEP_ANALYSIS_HPP
#define GTEP_ANALYSIS_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtep/benders.hpp"
#include "gtep/formulation.hpp"

namespace gtep {

enum class UcMode { kRelaxed, kInteger };
enum class Method { kBenders, kMonolithic };
const char* to_string(UcMode m);
const char* to_string(Method m);
// Throws std::invalid_argument for anything but "benders" / "monolithic".
Method parse_method(const std::string& s);

class InfeasiblePlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MismatchedInputsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Content hash (FNV-1a, 16 hex digits) of the canonical instance, calendar and
// scenario serializations.
std::string provenance_digest(const ModelData& d);

struct ScenarioEvaluation {
  std::string id;
  double probability = 0;
  CostBreakdown costs;  // summed over years
  SlackTotals slacks;   // summed over years
  double total() const { return costs.total(); }
};

struct PlanEvaluation {
  std::string digest;      // provenance_digest of the data the plan was evaluated on
  std::string provenance;  // where the plan came from
  UcMode uc = UcMode::kInteger;
  InvestmentPlan plan;
  double investment = 0;
  std::vector<ScenarioEvaluation> scenarios;         // data order
  std::vector<std::vector<double>> block_costs;      // [y][w]
  double expected_operations = 0;                    // sum_w pb_w ops_w
  double expected_total = 0;                         // investment + expected_operations
  SlackTotals expected_slacks;                       // probability-weighted
  bool proven_optimal = true;                        // every block solved to optimality
};

// Aggregates already-solved blocks. Expected values are summed in scenario-id
// order so the totals do not depend on the order of the scenario list.
PlanEvaluation summarize_operations(const ModelData& d, const InvestmentPlan& plan, UcMode uc,
                                    const std::vector<std::vector<OperationResult>>& ops, const BuildOptions& build);

// Solves every (y, w) block at the pinned plan. Throws InfeasiblePlanError if
// the plan violates a first-stage constraint.
PlanEvaluation evaluate_plan(const ModelData& d, const InvestmentPlan& plan, UcMode uc,
                             const BendersConfig& cfg = {});

struct SolveOutcome {
  Method method = Method::kBenders;
  UcMode uc = UcMode::kRelaxed;  // of `objective` and `operations`
  InvestmentPlan plan;
  double objective = 0;
  double relaxed_objective = 0;  // Benders z_UB; NaN for an integer-UC monolithic solve
  double gap = 0;                // Benders relative gap or B&B gap
  int iterations = 0;            // Benders iterations or B&B nodes
  bool converged = false;
  std::optional<BendersResult> benders;
  std::vector<std::vector<OperationResult>> operations;  // [y][w]
  double wall_ms = 0;
};

// Benders: relaxed iterations, then the integer final pass unless
// cfg.build.relax_uc. Monolithic: one MILP with UC relaxed iff cfg.build.relax_uc.
SolveOutcome solve_gtep(const ModelData& d, Method method, const BendersConfig& cfg = {});

// Solves the problem with every uncertain parameter at its expected value.
SolveOutcome solve_mvp(const ModelData& d, Method method, const BendersConfig& cfg = {});

// expected_total(MVP plan) - stoch_objective. Throws MismatchedInputsError if
// the evaluation was computed on different data.
double compute_vss(double stoch_objective, const std::string& stoch_digest, const PlanEvaluation& mvp_eval);

struct VssReport {
  UcMode uc = UcMode::kInteger;
  double stoch_total = 0, mvp_expected_total = 0, vss = 0, vss_pct = 0;  // vss_pct = vss / mvp_expected_total
};
// Both evaluations must share digest and UC mode.
VssReport vss_report(const PlanEvaluation& stoch_eval, const PlanEvaluation& mvp_eval);

struct VssRun {
  SolveOutcome stochastic, mean_value;
  PlanEvaluation stoch_eval, mvp_eval;
  VssReport report;
};
// Stochastic solve, MVP solve, and both plans evaluated by evaluate_plan under
// all scenarios in mode `uc`, so both terms come from the same block solves.
VssRun run_vss(const ModelData& d, Method method, UcMode uc, const BendersConfig& cfg = {});

// ---- Reports -----------------------------------------------------------------

// year, then one column per addition (delta_L, delta_J, delta_H, N_plus,
// N_minus, S, W, B_CAP, PtG_CAP) named by its label without the year.
void write_plan_csv(const InvestmentPlan& plan, std::ostream& out);
// term, one column per scenario, expected; rows are the ten cost terms,
// then operations, investment and total.
void write_costs_csv(const PlanEvaluation& e, std::ostream& out);
void write_evaluation_json(const PlanEvaluation& e, std::ostream& out);
void write_vss_json(const VssReport& r, std::ostream& out);
// Plan plus the nonzero second-stage values of every (y, w) block.
void write_solution_json(const ModelData& d, const SolveOutcome& s, std::ostream& out);

}  // namespace gtep

#endif  // GTEP_ANALYSIS_HPP
