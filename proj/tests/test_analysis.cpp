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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtep/analysis.hpp"
#include "gtep/milp.hpp"
#include "gtep/toy.hpp"

using namespace gtep;

namespace {

const std::string kData = GTEP_DATA_DIR;

ModelData toy2z() {
  return ModelData(load_instance_file(kData + "/toy2z/toy2z.json"),
                   load_calendar_file(kData + "/toy2z/toy2z_calendar.json"),
                   load_scenarios_file(kData + "/toy2z/toy2z_scenarios.json"));
}

ModelData bare_zero_demand() {
  SystemInstance in;
  in.base_year = 2030;
  in.years = {2030};
  in.power_zones = {{"Z", ""}};
  in.penalties = {100, 3000, 1000, 3000};
  RepresentativeCalendar cal;
  CalendarYear cy;
  cy.year = 2030;
  cy.clusters = {{"d", kDaysPerYear}};
  cy.day_map.assign(kDaysPerYear, 0);
  const std::vector<std::vector<double>> zero(1, std::vector<double>(kHours, 0.0));
  cy.solar["Z"] = cy.wind["Z"] = cy.reserve["Z"] = cy.demand_power["Z"] = zero;
  cal.years.push_back(cy);
  ScenarioSet s;
  s.scenarios.push_back({"only", 1.0, {50}, {}, {}});
  return ModelData(in, cal, s);
}

InvestmentPlan master_plan(const ModelData& d) {
  auto m = build_master(d, {}, 1);
  const auto sol = solve_milp(m.lp);
  REQUIRE(sol.optimal());
  return extract_plan(m.lp, m.x, sol.values, d.instance().years, "master");
}

BendersConfig relaxed_config() {
  BendersConfig cfg;
  cfg.build.relax_uc = true;
  return cfg;
}

// Multiplies every price of `s` by f.
Scenario scaled(Scenario s, double f, const std::string& id, double pb) {
  s.id = id;
  s.probability = pb;
  for (auto& v : s.co2) v *= f;
  for (auto& [k, vs] : s.fuel)
    for (auto& v : vs) v *= f;
  for (auto& [k, vs] : s.gas_cost)
    for (auto& v : vs) v *= f;
  return s;
}

void check_invariants(const PlanEvaluation& e) {
  CHECK(e.expected_total >= e.investment - 1e-9 * std::abs(e.investment));
  for (size_t w = 0; w < e.scenarios.size(); ++w) {
    double blocks = 0;
    for (const auto& per_year : e.block_costs) blocks += per_year[w];
    const double t = e.scenarios[w].total();
    CHECK(std::abs(blocks - t) <= 1e-6 * std::max(1.0, std::abs(t)));
  }
}

}  // namespace

TEST_CASE("zero demand, empty plan") {
  const auto d = bare_zero_demand();
  const auto plan = master_plan(d);
  for (UcMode uc : {UcMode::kRelaxed, UcMode::kInteger}) {
    const auto e = evaluate_plan(d, plan, uc);
    CHECK(e.expected_total == doctest::Approx(0));
    CHECK(e.investment == 0);
    check_invariants(e);
  }
}

TEST_CASE("toy2z: the Benders plan evaluates to z_UB") {
  const auto d = toy2z();
  auto cfg = relaxed_config();
  cfg.final_pass = false;
  const auto r = run_benders(d, cfg);
  REQUIRE(r.converged);
  const auto relaxed = evaluate_plan(d, r.state.x_best, UcMode::kRelaxed, cfg);
  check_invariants(relaxed);
  CHECK(std::abs(relaxed.expected_total - r.state.z_ub) <= 1e-6 * std::abs(r.state.z_ub));
  CHECK(relaxed.digest == provenance_digest(d));
  CHECK(relaxed.digest.size() == 16);

  cfg.parallelism = 3;
  const auto integer = evaluate_plan(d, r.state.x_best, UcMode::kInteger, cfg);
  check_invariants(integer);
  CHECK(relaxed.expected_total <= integer.expected_total * (1 + 1e-9));

  SUBCASE("scenario order does not matter") {
    auto scen = d.scenarios();
    std::reverse(scen.scenarios.begin(), scen.scenarios.end());
    const ModelData flipped(d.instance(), d.calendar_set(), scen);
    const auto e = evaluate_plan(flipped, r.state.x_best, UcMode::kRelaxed, relaxed_config());
    CHECK(e.expected_total == doctest::Approx(relaxed.expected_total).epsilon(1e-9));
    CHECK(e.digest != relaxed.digest);
  }

  SUBCASE("reports") {
    std::ostringstream plan_csv, costs_csv, json;
    write_plan_csv(relaxed.plan, plan_csv);
    write_costs_csv(relaxed, costs_csv);
    write_evaluation_json(relaxed, json);
    const auto p = plan_csv.str();
    CHECK(p.rfind("year,", 0) == 0);
    CHECK(p.find("N_plus[k=") != std::string::npos);
    CHECK(p.find(",y=") == std::string::npos);
    CHECK(std::count(p.begin(), p.end(), '\n') == 1 + d.num_years());
    const auto c = costs_csv.str();
    CHECK(c.rfind("term,", 0) == 0);
    CHECK(std::count(c.begin(), c.end(), '\n') == 1 + kNumCostTerms + 3);
    CHECK(json.str().find("\"expected_total\"") != std::string::npos);
  }
}

TEST_CASE("plans outside the first-stage bounds are rejected") {
  const auto d = toy2z();
  auto plan = master_plan(d);
  for (size_t i = 0; i < plan.labels[0].size(); ++i)
    if (plan.labels[0][i] == "N[k=CCGT,y=2030]") plan.values[0][i] = 1000;
  CHECK_THROWS_AS(evaluate_plan(d, plan, UcMode::kRelaxed), InfeasiblePlanError);
}

TEST_CASE("one scenario: the mean-value problem is the stochastic problem") {
  const auto d0 = toy2z();
  ScenarioSet one;
  one.scenarios.push_back(d0.scenarios().scenarios[0]);
  one.scenarios[0].probability = 1;
  const ModelData d(d0.instance(), d0.calendar_set(), one);
  auto cfg = relaxed_config();
  const auto stoch = solve_gtep(d, Method::kBenders, cfg);
  const auto mvp = solve_mvp(d, Method::kBenders, cfg);
  CHECK(mvp.objective == doctest::Approx(stoch.objective).epsilon(1e-9));
  CHECK(mvp.plan.values == stoch.plan.values);
}

TEST_CASE("price-symmetric scenarios: the mean-value objective is not below the stochastic one") {
  // Prices only enter the objective, so each block cost is concave in them.
  const auto d0 = toy2z();
  const auto& base = d0.scenarios().scenarios[0];
  ScenarioSet sym;
  sym.scenarios = {scaled(base, 0.8, "low", 0.5), scaled(base, 1.2, "high", 0.5)};
  const ModelData d(d0.instance(), d0.calendar_set(), sym);
  const auto cfg = relaxed_config();
  const auto stoch = solve_gtep(d, Method::kMonolithic, cfg);
  const auto mvp = solve_mvp(d, Method::kMonolithic, cfg);
  REQUIRE(stoch.converged);
  REQUIRE(mvp.converged);
  const double tol = 2e-6 * std::abs(stoch.objective);
  CHECK(mvp.objective >= stoch.objective - tol);
  MESSAGE("stochastic " << stoch.objective << ", mean value " << mvp.objective);
}

TEST_CASE("VSS") {
  ToyOptions o;
  o.identical_scenarios = true;
  o.scenarios = 3;
  o.years = 2;
  const auto t = generate_toy(4, o);
  const ModelData d(t.instance, t.calendar, t.scenarios);
  const auto run = run_vss(d, Method::kMonolithic, UcMode::kRelaxed, relaxed_config());
  const auto& r = run.report;
  CHECK(std::abs(r.vss) <= 1e-6 * (1 + std::abs(r.stoch_total)));
  CHECK(r.stoch_total == run.stoch_eval.expected_total);
  CHECK(r.vss_pct == doctest::Approx(r.vss / r.mvp_expected_total));
  CHECK(r.uc == UcMode::kRelaxed);

  std::ostringstream js;
  write_vss_json(r, js);
  for (const char* key : {"\"stoch_total\"", "\"mvp_expected_total\"", "\"vss\"", "\"vss_pct\""})
    CHECK(js.str().find(key) != std::string::npos);

  CHECK_THROWS_AS(compute_vss(r.stoch_total, "0000000000000000", run.mvp_eval), MismatchedInputsError);
  auto other = run.mvp_eval;
  other.uc = UcMode::kInteger;
  CHECK_THROWS_AS(vss_report(run.stoch_eval, other), MismatchedInputsError);
  CHECK(compute_vss(r.stoch_total, run.stoch_eval.digest, run.mvp_eval) == r.vss);
}

TEST_CASE("method names") {
  CHECK(parse_method("benders") == Method::kBenders);
  CHECK(parse_method("monolithic") == Method::kMonolithic);
  CHECK_THROWS_AS(parse_method("lagrangian"), std::invalid_argument);
}

TEST_CASE("solver failures carry the block") {
  struct Failing : SolverBackend {
    std::string name() const override { return "failing"; }
    LpSolution solve_lp(const LpProblem&, const SolverOptions&, const Basis*) const override { return {}; }
    MilpSolution solve_milp(const LpProblem&, const SolverOptions&, const Eigen::VectorXd*) const override {
      return {};
    }
  };
  const auto d = toy2z();
  const auto plan = master_plan(d);
  auto cfg = relaxed_config();
  cfg.backend = std::make_shared<Failing>();
  try {
    evaluate_plan(d, plan, UcMode::kRelaxed, cfg);
    FAIL("expected a solver failure");
  } catch (const SolverFailure& e) {
    CHECK(e.year == 2030);
    CHECK(e.scenario == d.scenarios().scenarios[0].id);
  }
  CHECK_THROWS_AS(solve_gtep(d, Method::kBenders, cfg), SolverFailure);
  CHECK_THROWS_AS(solve_gtep(d, Method::kMonolithic, cfg), SolverFailure);
}
