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

#include <map>
#include <set>
#include <string>

#include "gtep/formulation.hpp"
#include "gtep/milp.hpp"
#include "gtep/simplex.hpp"

using namespace gtep;

namespace {

const std::string kData = GTEP_DATA_DIR;

ModelData toy2z() {
  return ModelData(load_instance_file(kData + "/toy2z/toy2z.json"),
                   load_calendar_file(kData + "/toy2z/toy2z_calendar.json"),
                   load_scenarios_file(kData + "/toy2z/toy2z_scenarios.json"));
}

// Collapses every calendar year onto its first representative day.
RepresentativeCalendar one_day(RepresentativeCalendar cal) {
  for (auto& cy : cal.years) {
    cy.clusters = {{cy.clusters[0].id, kDaysPerYear}};
    cy.day_map.assign(kDaysPerYear, 0);
    for (Profile* p : {&cy.solar, &cy.wind, &cy.inflow, &cy.demand_power, &cy.demand_gas, &cy.reserve})
      for (auto& [key, days] : *p) days.resize(1);
  }
  return cal;
}

// One zone, no assets, one representative day of weight 365.
ModelData bare(double demand) {
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
  cy.solar["Z"] = cy.wind["Z"] = cy.reserve["Z"] = zero;
  cy.demand_power["Z"] = {std::vector<double>(kHours, demand)};
  cal.years.push_back(cy);
  ScenarioSet s;
  s.scenarios.push_back({"only", 1.0, {50}, {}, {}});
  return ModelData(in, cal, s);
}

InvestmentPlan first_stage_plan(const ModelData& d) {
  auto m = build_master(d, {}, 1);
  const auto sol = solve_milp(m.lp);
  REQUIRE(sol.optimal());
  return extract_plan(m.lp, m.x, sol.values, d.instance().years, "master");
}

double solve_objective(const LpProblem& lp) {
  const auto s = solve_lp(lp);
  REQUIRE(s.optimal());
  return s.objective;
}

}  // namespace

TEST_CASE("marginal cost") {
  ThermalCluster gas;
  gas.fuel = "gas";
  gas.om_cost = 2;
  gas.co2_rate = 0.35;
  gas.heat_rate = 1.9;
  Scenario w{"w", 1, {40}, {}, {}};
  CHECK(std::abs(marginal_cost(gas, 0, w) - 16.0) <= 1e-9);

  ThermalCluster coal;
  coal.fuel = "coal";
  coal.heat_rate = 2.937;
  w.co2 = {25};
  w.fuel["coal"] = {9.79};
  // 2.937 * 9.79 = 28.75323 exactly.
  CHECK(std::abs(marginal_cost(coal, 0, w) - 28.75323) <= 1e-9);

  coal.om_cost = 4.5;
  coal.co2_rate = 0.9;
  Scenario zero{"z", 1, {0}, {{"coal", {0}}}, {}};
  CHECK(marginal_cost(coal, 0, zero) == 4.5);

  CHECK_THROWS_AS(marginal_cost(coal, 0, Scenario{"x", 1, {1}, {}, {}}), MissingPriceError);
  CHECK_THROWS_AS(marginal_cost(gas, 1, w), MissingPriceError);
}

TEST_CASE("labels") {
  const std::string l = make_label("bal_P", {{"z", "ITn"}, {"t", "7"}, {"c", "2"}, {"y", "2025"}, {"w", "HC"}});
  CHECK(l == "bal_P[z=ITn,t=7,c=2,y=2025,w=HC]");
  const auto p = parse_label(l);
  CHECK(p.symbol == "bal_P");
  CHECK(p.at("w") == "HC");
  CHECK(p.indices.size() == 5);
  CHECK_THROWS_AS(p.at("k"), std::out_of_range);
  CHECK(parse_label(make_label("N", {{"k", "CCGT3"}, {"y", "2025"}})).at("k") == "CCGT3");
  CHECK_THROWS_AS(parse_label("no brackets"), std::invalid_argument);
  CHECK_THROWS_AS(parse_label("x[k]"), std::invalid_argument);

  const auto d = toy2z();
  const auto m = build_monolithic(d);
  std::set<std::string> cols(m.lp.col_names.begin(), m.lp.col_names.end());
  std::set<std::string> rows(m.lp.row_names.begin(), m.lp.row_names.end());
  CHECK(cols.size() == m.lp.col_names.size());
  CHECK(rows.size() == m.lp.row_names.size());
  for (const auto& n : m.lp.col_names) CHECK_FALSE(parse_label(n).indices.empty());
  CHECK(cols.count("N[k=CCGT,y=2030]"));
  CHECK(cols.count("gamma[k=CCGT,t=0,c=winter,y=2031,w=HC]"));
  CHECK(rows.count("bal_P[z=N,t=7,c=summer,y=2030,w=LC]"));
  CHECK(rows.count("hydro_LT_wrap[h=HN,y=2030,w=LC]"));
}

TEST_CASE("column counts match the closed form") {
  const auto base = toy2z();
  const ModelData d(base.instance(), one_day(base.calendar_set()), base.scenarios());
  const auto cc = catalog_counts(d);
  // Hand count for toy2z: |L|=2 (1 candidate), |J|=0, |H|=2 (1 programmable,
  // none candidate), |K|=2, |Z|=2, |B|=1, |G|=1, |N|=1, one day, 52 checkpoints.
  //   first stage / year : 2*1 + 3*2 + 4*2 + 2*1 + 2*1 + 24*1*2           = 68
  //   second stage / (y,w): 24*(8 + 2 + 2 + 3 + 2 + 6 + 1 + 4 + 0) + 2 + 52*2 = 778
  CHECK(cc.first_stage == std::vector<long>{68, 68});
  CHECK(cc.second_stage == std::vector<long>{778, 778});
  CHECK(cc.monolithic == 2 * 68 + 4 * 778);
  CHECK(cc.master == 2 * 68 + 2);
  CHECK(cc.subproblem(0) == 68 + 778);

  const auto m = build_monolithic(d);
  CHECK(m.lp.num_cols() == cc.monolithic);
  const auto plan = first_stage_plan(d);
  CHECK(build_master(d, {}, 1).lp.num_cols() == cc.master);
  CHECK(build_subproblem(d, 1, 0, plan).lp.num_cols() == cc.subproblem(1));

  std::map<std::string, int> by_symbol;
  for (const auto& n : m.lp.col_names) ++by_symbol[parse_label(n).symbol];
  CHECK(by_symbol["H_LT"] == 2 * 2 * 52);
  CHECK(by_symbol["G_LT"] == 2 * 2 * 52);
  CHECK(by_symbol["gamma"] == 2 * 2 * 2 * 25);
  CHECK(by_symbol["H_IN"] == 2 * 2 * 24);
  CHECK(by_symbol["RES"] == 2 * 2 * 24);
  CHECK(by_symbol["delta_L"] == 2);

  auto full = toy2z();
  CHECK(build_monolithic(full).lp.num_cols() == catalog_counts(full).monolithic);
}

TEST_CASE("trivial instances") {
  SUBCASE("zero demand costs nothing") {
    const auto d = bare(0);
    const auto m = build_monolithic(d);
    CHECK(solve_objective(m.lp) == doctest::Approx(0));
    CHECK(m.lp.objective(Eigen::VectorXd::Zero(m.lp.num_cols())) == 0);
  }
  SUBCASE("only energy not supplied serves the load") {
    const auto d = bare(100);
    const auto sp = build_subproblem(d, 0, 0, first_stage_plan(d));
    CHECK(solve_objective(sp.lp) == doctest::Approx(365.0 * 24 * 100 * 3000).epsilon(1e-12));
  }
  SUBCASE("no policy rows without targets") {
    auto d0 = toy2z();
    auto in = d0.instance();
    in.policy["IT"].res_share = {0, 0};
    const ModelData d(in, d0.calendar_set(), d0.scenarios());
    const auto m = build_monolithic(d);
    for (const auto& n : m.lp.row_names) {
      CHECK(n.rfind("pen[", 0) != 0);
      CHECK(n.rfind("CO2[", 0) != 0);
    }
  }
}

TEST_CASE("master and cuts") {
  const auto d = toy2z();
  auto m1 = build_master(d, {}, 1);
  REQUIRE(m1.theta.size() == 2);
  for (int j : m1.theta) {
    CHECK(m1.lp.col_lower[j] == 0);
    CHECK(m1.lp.col_upper[j] == 0);
    CHECK(m1.lp.cost[j] == doctest::Approx(0.5));
  }
  auto m2 = build_master(d, {}, 2);
  for (int j : m2.theta) CHECK(std::isinf(m2.lp.col_lower[j]));

  Cut flat;
  flat.iteration = 1;
  flat.scenario = 1;
  for (int yi = 0; yi < 2; ++yi) {
    const size_t n = m2.x[yi].cols.size();
    flat.years.push_back({7.0, std::vector<double>(n, 1.0), std::vector<double>(n, 0.0)});
  }
  const int rows = m2.lp.num_rows();
  add_cut_row(m2, flat);
  REQUIRE(m2.lp.num_rows() == rows + 1);
  CHECK(m2.lp.row_sense.back() == RowSense::kGreaterEqual);
  CHECK(m2.lp.rhs.back() == 14);
  int coefs = 0;
  for (const auto& t : m2.lp.entries)
    if (t.row() == rows) {
      ++coefs;
      CHECK(t.col() == m2.theta[1]);
      CHECK(t.value() == 1);
    }
  CHECK(coefs == 1);

  Cut one;
  one.years.push_back({100.0, {1.0}, {-3.0}});
  CHECK(one.evaluate({{2.0}}) == 97);
  CHECK(one.evaluate({{1.0}}) == 100);
  CHECK(one.constant() == 103);

  Cut bad = flat;
  bad.years[0].lambda.pop_back();
  CHECK_THROWS_AS(add_cut_row(m2, bad), std::invalid_argument);
}

TEST_CASE("plans") {
  const auto d = toy2z();
  const auto plan = first_stage_plan(d);
  CHECK(check_plan(d, plan).empty());
  CHECK(plan.value("N[k=CCGT,y=2030]") >= 0);
  CHECK(investment_cost(d, plan) >= 0);
  CHECK_THROWS_AS(plan.value("N[k=NOPE,y=2030]"), std::out_of_range);

  auto over = plan;
  for (size_t i = 0; i < over.labels[0].size(); ++i)
    if (over.labels[0][i] == "N[k=CCGT,y=2030]") over.values[0][i] = 9;
  CHECK_FALSE(check_plan(d, over).empty());

  auto frac = plan;
  for (size_t i = 0; i < frac.labels[1].size(); ++i)
    if (frac.labels[1][i] == "theta_L[l=LC_NS,y=2031]") frac.values[1][i] = 0.5;
  CHECK_FALSE(check_plan(d, frac).empty());

  auto sp = build_subproblem(d, 0, 0, plan);
  CHECK(sp.lp.fixing_rows == sp.fix_rows);
  CHECK(sp.lp.row_names[sp.fix_rows[0]] == "fix_" + plan.labels[0][0]);
  auto moved = plan.values[0];
  moved[0] += 1;
  pin_plan(sp, moved);
  CHECK(sp.lp.rhs[sp.fix_rows[0]] == moved[0]);
  CHECK_THROWS_AS(pin_plan(sp, {1.0}), std::invalid_argument);

  auto short_plan = plan;
  short_plan.values[1].pop_back();
  CHECK_THROWS_AS(build_subproblem(d, 1, 0, short_plan), std::invalid_argument);
}

TEST_CASE("monolithic splits into investment plus subproblems") {
  const auto d = toy2z();
  const auto plan = first_stage_plan(d);

  auto m = build_monolithic(d);
  for (int yi = 0; yi < d.num_years(); ++yi)
    for (size_t i = 0; i < m.x[yi].cols.size(); ++i) {
      const int j = m.x[yi].cols[i];
      m.lp.col_lower[j] = m.lp.col_upper[j] = plan.values[yi][i];
    }
  std::fill(m.lp.is_integer.begin(), m.lp.is_integer.end(), 0);
  const auto ms = solve_lp(m.lp);
  REQUIRE(ms.optimal());

  double split = investment_cost(d, plan);
  for (int yi = 0; yi < d.num_years(); ++yi)
    for (int wi = 0; wi < d.num_scenarios(); ++wi) {
      const auto sp = build_subproblem(d, yi, wi, plan);
      const auto s = solve_lp(sp.lp);
      REQUIRE(s.optimal());
      split += d.scenarios().scenarios[wi].probability * s.objective;

      const auto phys = check_physics(d, sp.x, sp.ops, s.primal);
      CHECK(phys.max_residual() <= 1e-6);
      const auto cb = operating_costs(d, sp.ops, s.primal);
      CHECK(cb.total() == doctest::Approx(s.objective).epsilon(1e-9));
      const auto sl = slack_totals(d, sp.ops, s.primal);
      CHECK(sl.energy_not_supplied >= 0);

      const auto mp = check_physics(d, m.x[yi], m.ops[yi][wi], ms.primal);
      CHECK(mp.max_residual() <= 1e-6);
    }
  CHECK(ms.objective == doctest::Approx(split).epsilon(1e-6));
}

TEST_CASE("integer unit commitment") {
  const auto d = toy2z();
  const auto plan = first_stage_plan(d);
  BuildOptions o;
  o.relax_uc = false;
  const auto sp = build_subproblem(d, 0, 1, plan, o);
  CHECK(sp.lp.has_integers());
  SolverOptions so;
  so.mip_gap = 1e-4;
  const auto s = solve_milp(sp.lp, so);
  REQUIRE(s.has_solution());
  const auto phys = check_physics(d, sp.x, sp.ops, s.values);
  CHECK(phys.max_residual() <= 1e-6);
  CHECK(phys.uc_integrality <= 1e-6);
  CHECK(phys.uc_identity <= 1e-6);

  const auto relaxed = build_subproblem(d, 0, 1, plan);
  CHECK(solve_objective(relaxed.lp) <= s.objective * (1 + 1e-9));
}

TEST_CASE("discounting of operations") {
  const auto d = toy2z();
  const auto plan = first_stage_plan(d);
  BuildOptions o;
  o.discount_operations = true;
  const double plain = solve_objective(build_subproblem(d, 1, 0, plan).lp);
  const double disc = solve_objective(build_subproblem(d, 1, 0, plan, o).lp);
  CHECK(disc == doctest::Approx(plain / 1.05).epsilon(1e-7));
}
