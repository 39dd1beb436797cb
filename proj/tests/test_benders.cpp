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

#include <cmath>
#include <sstream>

#include "gtep/benders.hpp"
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

ModelData from_toy(const ToyData& t) { return ModelData(t.instance, t.calendar, t.scenarios); }

double monolithic(const ModelData& d) {
  const auto m = build_monolithic(d);
  const auto s = solve_milp(m.lp);
  REQUIRE(s.optimal());
  return s.objective;
}

void check_bound_discipline(const BendersState& s) {
  for (size_t i = 0; i < s.trace.size(); ++i) {
    const auto& r = s.trace[i];
    CHECK(r.z_lb <= r.z_ub + 1e-6 * (1 + std::abs(r.z_ub)));
    if (i > 0) {
      CHECK(r.z_lb >= s.trace[i - 1].z_lb);
      CHECK(r.z_ub <= s.trace[i - 1].z_ub);
    }
    CHECK(r.non_optimal_subproblems == 0);
  }
}

}  // namespace

TEST_CASE("cut construction") {
  const auto c = make_cut(3, 1, {{10, {1, 2}, {-1, 0.5}}, {97, {0}, {3}}});
  CHECK(c.iteration == 3);
  CHECK(c.scenario == 1);
  CHECK(c.constant() == doctest::Approx(10 - (-1 + 1) + 97));
  // At the anchor the cut reproduces the anchored costs.
  CHECK(c.evaluate({{1, 2}, {0}}) == doctest::Approx(107));
  CHECK(c.evaluate({{2, 2}, {1}}) == doctest::Approx(107 - 1 + 3));
  CHECK_THROWS_AS(make_cut(1, 0, {{1, {1, 2}, {1}}}), std::invalid_argument);
  CHECK_THROWS_AS(make_cut(1, 0, {}), std::invalid_argument);
}

TEST_CASE("bound updates") {
  InvestmentPlan a, b;
  a.values = {{1}};
  b.values = {{2}};
  BendersState s;
  s.iteration = 1;
  s = update_bounds(s, 5, 0, {{42}}, {1}, a);
  CHECK(s.z_ub == 42);
  CHECK(s.z_lb == 5);
  CHECK(s.best_iteration == 1);
  CHECK(s.x_best.values == a.values);

  s.iteration = 2;
  s = update_bounds(s, 3, 10, {{40}}, {1}, b);  // worse iterate, lower master bound
  CHECK(s.z_ub == 42);
  CHECK(s.z_lb == 5);
  CHECK(s.x_best.values == a.values);

  s.iteration = 3;
  s = update_bounds(s, 6, 1, {{30, 50}}, {0.5, 0.5}, b);
  CHECK(s.z_ub == 41);
  CHECK(s.x_best.values == b.values);
  CHECK(s.best_iteration == 3);
  REQUIRE(s.trace.size() == 3);
  CHECK(s.trace[1].z_gtep == 50);
  CHECK(s.trace[2].rel_gap == doctest::Approx((41.0 - 6) / 41));

  // Equal candidate does not replace the incumbent.
  s.iteration = 4;
  s = update_bounds(s, 6, 1, {{40}}, {1}, a);
  CHECK(s.best_iteration == 3);

  CHECK(relative_gap(0, 0) == 0);
  CHECK(std::isinf(relative_gap(-kInfinity, 3)));
}

TEST_CASE("no candidates: converges at the second iteration") {
  ToyOptions o;
  o.candidates = false;
  o.years = 2;
  o.power_zones = 2;
  o.gas_zones = 1;
  o.scenarios = 2;
  const auto d = from_toy(generate_toy(7, o));
  BendersConfig cfg;
  cfg.final_pass = false;
  const auto r = run_benders(d, cfg);
  CHECK(r.converged);
  CHECK(r.state.iteration == 2);
  CHECK(r.state.z_lb == doctest::Approx(r.state.z_ub).epsilon(1e-9));
  check_bound_discipline(r.state);
}

TEST_CASE("toy2z agrees with the monolithic problem") {
  const auto d = toy2z();
  const double z_star = monolithic(d);
  BendersConfig cfg;
  cfg.parallelism = 2;
  const auto r = run_benders(d, cfg);
  REQUIRE(r.converged);
  check_bound_discipline(r.state);
  CHECK(r.state.trace.back().rel_gap <= 1e-3);
  CHECK(r.state.z_lb <= z_star + 1e-6 * (1 + std::abs(z_star)));
  CHECK(r.state.z_ub >= z_star - 1e-6 * (1 + std::abs(z_star)));
  CHECK(std::abs(r.state.z_ub - z_star) <= 1e-3 * std::abs(z_star));

  REQUIRE(r.final_pass);
  CHECK(r.final_total >= r.relaxed_total - 1e-9 * std::abs(r.relaxed_total));
  CHECK(r.final_gap >= -1e-9);
  for (const auto& per_year : r.operations)
    for (const auto& op : per_year) {
      const auto phys = check_physics(d, op.x, op.ops, op.values);
      CHECK(phys.max_residual() <= 1e-6);
      CHECK(phys.uc_integrality <= 1e-6);
    }

  // Every stored cut under-estimates the subproblem costs at x_BEST.
  for (const auto& c : r.state.cuts) {
    double z = 0;
    for (size_t yi = 0; yi < r.relaxed_costs.size(); ++yi) z += r.relaxed_costs[yi][c.scenario];
    CHECK(c.evaluate(r.state.x_best.values) <= z + 1e-6 * (1 + std::abs(z)));
  }

  std::ostringstream csv;
  write_convergence_csv(r.state, csv);
  CHECK(csv.str().rfind("iter,z_LB,z_UB,rel_gap,master_ms,subproblems_ms\n", 0) == 0);
}

TEST_CASE("zero tolerance and iteration limit") {
  const auto d = toy2z();
  BendersConfig cfg;
  cfg.final_pass = false;
  cfg.max_iter = 1;
  const auto one = run_benders(d, cfg);
  CHECK_FALSE(one.converged);
  CHECK(one.state.trace.size() == 1);

  cfg.max_iter = 100;
  cfg.eps = 0;
  const auto exact = run_benders(d, cfg);
  CHECK(exact.state.trace.back().rel_gap <= 1e-6);
  check_bound_discipline(exact.state);

  cfg.eps = -1;
  CHECK_THROWS_AS(run_benders(d, cfg), std::invalid_argument);
}

TEST_CASE("parallelism does not change the result") {
  const auto d = toy2z();
  BendersConfig cfg;
  cfg.final_pass = false;
  const auto a = run_benders(d, cfg);
  cfg.parallelism = 4;
  const auto b = run_benders(d, cfg);
  CHECK(a.state.z_ub == b.state.z_ub);
  CHECK(a.state.z_lb == b.state.z_lb);
  CHECK(a.state.iteration == b.state.iteration);
}
