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

#ifndef GTEP_FORMULATION_HPP
#define GTEP_FORMULATION_HPP

#include <array>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gtep/calendar.hpp"
#include "gtep/cut.hpp"
#include "gtep/lp.hpp"
#include "gtep/system_model.hpp"

namespace gtep {

struct BuildOptions {
  bool relax_uc = true;              // alpha, beta, gamma continuous
  bool discount_operations = false;  // apply 1/(1+r)^(y-y0) to second-stage costs too
};

class MissingPriceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// C^M of cluster k in year position yi under scenario w. Gas-fired clusters
// pay for fuel through the gas balance, so only O&M and CO2 enter here.
double marginal_cost(const ThermalCluster& k, int yi, const Scenario& w);

// Validated, immutable model inputs plus derived lookups.
class ModelData {
 public:
  // Throws std::invalid_argument listing the violations if validation fails.
  ModelData(SystemInstance inst, RepresentativeCalendar cal, ScenarioSet scen);

  const SystemInstance& instance() const { return inst_; }
  const RepresentativeCalendar& calendar_set() const { return cal_; }
  const ScenarioSet& scenarios() const { return scen_; }
  int num_years() const { return inst_.num_years(); }
  int num_scenarios() const { return scen_.size(); }
  const CalendarYear& calendar(int yi) const { return cal_.years[cal_index_[yi]]; }
  const CheckpointChain& chain(int yi) const { return chains_[yi]; }
  double discount(int yi) const;  // 1/(1+r)^(y-y0)

  int cluster_zone(int k) const { return cluster_zone_[k]; }
  int cluster_gas_zone(int k) const { return cluster_gas_[k]; }  // -1 unless gas-fired
  int area_of_zone(int z) const { return zone_area_[z]; }        // -1 if none

 private:
  SystemInstance inst_;
  RepresentativeCalendar cal_;
  ScenarioSet scen_;
  std::vector<int> cal_index_;
  std::vector<CheckpointChain> chains_;
  std::vector<int> cluster_zone_, cluster_gas_, zone_area_;
};

// ---- Labels -----------------------------------------------------------------

// symbol[key=value,...], keys in the given order.
std::string make_label(const std::string& symbol, std::initializer_list<std::pair<const char*, std::string>> idx);

struct ParsedLabel {
  std::string symbol;
  std::vector<std::pair<std::string, std::string>> indices;
  // Throws std::out_of_range if the key is absent.
  const std::string& at(const std::string& key) const;
};
// Throws std::invalid_argument on malformed labels.
ParsedLabel parse_label(const std::string& label);

// ---- Column references --------------------------------------------------------

// Dense [i][j][k] table of column indices; -1 where a column does not exist.
struct IndexGrid {
  int n1 = 0, n2 = 0, n3 = 0;
  std::vector<int> v;
  void resize(int a, int b, int c) {
    n1 = a;
    n2 = b;
    n3 = c;
    v.assign(static_cast<size_t>(a) * b * c, -1);
  }
  int& operator()(int i, int j, int k) { return v[(static_cast<size_t>(i) * n2 + j) * n3 + k]; }
  int operator()(int i, int j, int k) const { return v[(static_cast<size_t>(i) * n2 + j) * n3 + k]; }
};

// First-stage columns x_y of one year. `cols` is the canonical order shared
// by master, monolithic and subproblem copies; cuts and plans use it.
struct FirstStageRefs {
  std::vector<int> cols;
  std::vector<int> delta_line, theta_line;     // per line; -1 for existing
  std::vector<int> delta_pipe, theta_pipe;     // per pipeline
  std::vector<int> delta_hydro, theta_hydro;   // per hydro plant
  std::vector<int> n_units, n_plus, n_minus;   // per thermal cluster
  std::vector<int> solar_add, wind_add, solar_total, wind_total;  // per zone
  std::vector<int> bat_add, bat_avail;         // per battery
  std::vector<int> ptg_add, ptg_avail;         // per PtG tech
  IndexGrid res;                               // [zone][cluster][hour]
};

// Second-stage columns of one (year, scenario) block. Hours are 0-based,
// except gamma whose hour index 0 is the boundary value before hour 1.
struct OperationRefs {
  int year = 0, scenario = 0;
  IndexGrid alpha, beta, gamma, p;       // [cluster k][day c][t]; gamma has 25 slots
  IndexGrid h_out, h_in, h_spill;        // [plant][c][t]; in/spill -1 if non-programmable
  std::vector<std::vector<int>> h_lt;    // [plant][checkpoint-1]
  IndexGrid bat, bat_in, bat_out;        // [battery][c][t]
  IndexGrid f_line;                      // [line][c][t]
  IndexGrid og, enp, rnp;                // [zone][c][t]
  IndexGrid g_ptg;                       // [tech][c][t]
  IndexGrid g_sup, g_in, g_out, g_curt;  // [gas zone][c][t]
  IndexGrid f_pipe;                      // [pipeline][c][t]
  std::vector<std::vector<int>> g_lt;    // [gas zone][checkpoint-1]
};

// ---- Problem variants -------------------------------------------------------

struct MonolithicProblem {
  LpProblem lp;
  std::vector<FirstStageRefs> x;               // per year
  std::vector<std::vector<OperationRefs>> ops;  // [year][scenario]
};

struct MasterProblem {
  LpProblem lp;
  std::vector<FirstStageRefs> x;  // per year
  std::vector<int> theta;         // per scenario
};

struct SubProblem {
  LpProblem lp;
  int year = 0, scenario = 0;
  FirstStageRefs x;  // the pinned copies of x_y
  std::vector<int> fix_rows;  // aligned with x.cols
  OperationRefs ops;
};

// Investment decisions per year in FirstStageRefs::cols order.
struct InvestmentPlan {
  std::vector<int> years;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::vector<double>> values;
  std::string provenance;
  // Throws std::out_of_range for unknown labels.
  double value(const std::string& label) const;
};

MonolithicProblem build_monolithic(const ModelData& d, const BuildOptions& o = {});
// Iteration 1 fixes every theta_w to 0; later iterations leave theta_w free
// and bind it through the cuts.
MasterProblem build_master(const ModelData& d, std::span<const Cut> cuts, int iteration, const BuildOptions& o = {});
// Throws std::invalid_argument if the plan does not match year yi's layout.
SubProblem build_subproblem(const ModelData& d, int yi, int wi, const InvestmentPlan& plan,
                            const BuildOptions& o = {});
// Re-pins the copies of x_y (right-hand sides of the fixing rows only).
void pin_plan(SubProblem& sp, const std::vector<double>& x_y);

// Appends a cut row to an existing master.
void add_cut_row(MasterProblem& m, const Cut& cut);

// Reads x_y out of a solved master or monolithic problem; integer columns are rounded.
InvestmentPlan extract_plan(const LpProblem& lp, const std::vector<FirstStageRefs>& x, const Eigen::VectorXd& values,
                            const std::vector<int>& years, std::string provenance);
// CI_y' x_y summed over years.
double investment_cost(const ModelData& d, const InvestmentPlan& plan);
// Plan invariants: integrality, monotone availability, unit-count identity, first-stage bounds.
std::vector<std::string> check_plan(const ModelData& d, const InvestmentPlan& plan, double tol = 1e-6);

// Closed-form column counts (see docs/instance-format.md).
struct CatalogCounts {
  std::vector<long> first_stage;                // per year
  std::vector<long> second_stage;               // per year (identical across scenarios)
  long monolithic = 0, master = 0;
  long subproblem(int yi) const { return first_stage[yi] + second_stage[yi]; }
};
CatalogCounts catalog_counts(const ModelData& d);

// ---- Evaluation of operational solutions ------------------------------------

enum class CostTerm : int {
  kHydro,
  kStartup,
  kThermal,
  kBattery,
  kOvergeneration,
  kEnergyNotSupplied,
  kReserveNotSupplied,
  kGasSupply,
  kPtg,
  kGasCurtailment,
};
inline constexpr int kNumCostTerms = 10;
const char* to_string(CostTerm t);

// The itemized operating cost of one (year, scenario) block, psi-weighted,
// unweighted by probability; discounted only under discount_operations.
struct CostBreakdown {
  std::array<double, kNumCostTerms> terms{};
  double total() const;
};
CostBreakdown operating_costs(const ModelData& d, const OperationRefs& ops, const Eigen::VectorXd& v,
                              const BuildOptions& o = {});

// Slack energy totals of one block, psi-weighted (MWh / MWh_th).
struct SlackTotals {
  double energy_not_supplied = 0, overgeneration = 0, reserve_not_supplied = 0, gas_curtailment = 0;
};
SlackTotals slack_totals(const ModelData& d, const OperationRefs& ops, const Eigen::VectorXd& v);

// Residuals recomputed from the data, independent of the assembled rows.
struct PhysicsReport {
  double power_balance = 0;  // max |lhs - rhs|, MW
  double gas_balance = 0;    // MW_th
  double hydro_cycle = 0;    // max over chain links, MWh
  double gas_cycle = 0;
  double battery_cycle = 0;
  double uc_identity = 0;    // |gamma_t - gamma_{t-1} - alpha_t + beta_t|
  double uc_integrality = 0;  // distance of alpha, beta, gamma from integers
  double mut_violation = 0, mdt_violation = 0;
  double co2_excess = 0;     // ton above the cap, per area
  double res_shortfall = 0;  // share below target, per area
  double bound_violation = 0;
  // Everything except uc_integrality, which only applies to integer UC.
  double max_residual() const;
};
// `x` refers to the columns holding x_y in `v` (copies for a subproblem).
PhysicsReport check_physics(const ModelData& d, const FirstStageRefs& x, const OperationRefs& ops,
                            const Eigen::VectorXd& v);

// Integer commitment built from a relaxed solution `v` of an integer-UC block:
// gamma is rounded so the units on can carry the relaxed output, then forced to respect minimum up/down times, and
// alpha/beta follow from the gamma steps. Other entries of `v` are kept.
// Meant as a MILP starting point.
Eigen::VectorXd commitment_hint(const ModelData& d, const FirstStageRefs& x, const OperationRefs& ops,
                                Eigen::VectorXd v);

}  // namespace gtep

#endif  // GTEP_FORMULATION_HPP
