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

#include <numeric>
#include <random>

#include "gtep/calendar.hpp"
#include "gtep/system_model.hpp"

using namespace gtep;

namespace {

CalendarYear random_year(std::mt19937& rng, int nc) {
  CalendarYear cy;
  cy.year = 2030;
  for (int c = 0; c < nc; ++c) cy.clusters.push_back({"c" + std::to_string(c), 0});
  std::uniform_int_distribution<int> pick(0, nc - 1);
  std::uniform_real_distribution<double> u(0, 50);
  for (int d = 0; d < kDaysPerYear; ++d) {
    const int c = pick(rng);
    cy.day_map.push_back(c);
    ++cy.clusters[c].weight;
  }
  auto& f = cy.inflow["H1"];
  f.assign(nc, std::vector<double>(kHours));
  for (auto& day : f)
    for (auto& v : day) v = u(rng);
  return cy;
}

}  // namespace

TEST_CASE("checkpoint chains") {
  std::mt19937 rng(1);
  const auto cy = random_year(rng, 3);

  const auto w = expand_checkpoints(cy, 7);
  CHECK(w.num_checkpoints == 52);
  CHECK(w.tail().first_day == 365);
  CHECK(w.tail().last_day == 365);
  CHECK(w.segments[1].first_day == 8);
  CHECK(w.segments[1].last_day == 14);

  const auto a = expand_checkpoints(cy, 365);
  CHECK(a.num_checkpoints == 1);
  CHECK(a.tail().num_days() == 0);

  const auto m = expand_checkpoints(cy, 30);
  CHECK(m.num_checkpoints == 12);
  CHECK(m.tail().first_day == 361);
  CHECK(m.tail().last_day == 365);
}

TEST_CASE("segments partition the year and conserve inflow") {
  std::mt19937 rng(7);
  for (int period : {1, 2, 7, 30, 31, 100, 182, 183, 364, 365}) {
    const auto cy = random_year(rng, 1 + period % 4);
    const auto ch = expand_checkpoints(cy, period);
    int next = 1;
    std::vector<int> days(cy.num_clusters(), 0);
    double seg_inflow = 0;
    for (const auto& s : ch.segments) {
      if (s.num_days() > 0) {
        CHECK(s.first_day == next);
        next = s.last_day + 1;
      }
      for (int c = 0; c < cy.num_clusters(); ++c) {
        days[c] += s.cluster_days[c];
        for (int t = 0; t < kHours; ++t) seg_inflow += s.cluster_days[c] * CalendarYear::at(cy.inflow, "H1", c, t);
      }
    }
    CHECK(next == 366);
    double annual = 0;
    for (int c = 0; c < cy.num_clusters(); ++c) {
      CHECK(days[c] == cy.clusters[c].weight);
      for (int t = 0; t < kHours; ++t) annual += cy.clusters[c].weight * CalendarYear::at(cy.inflow, "H1", c, t);
    }
    CHECK(seg_inflow == doctest::Approx(annual).epsilon(1e-12));
  }
}

TEST_CASE("mean value scenario") {
  ScenarioSet two;
  two.scenarios.push_back({"A", 0.5, {35}, {{"coal", {10}}}, {{"G1", {30}}}});
  two.scenarios.push_back({"B", 0.5, {53}, {{"coal", {20}}}, {{"G1", {40}}}});
  const auto m = mean_value_scenario(two);
  REQUIRE(m.size() == 1);
  CHECK(m.scenarios[0].probability == 1);
  CHECK(m.scenarios[0].co2[0] == doctest::Approx(44));
  CHECK(m.scenarios[0].fuel.at("coal")[0] == doctest::Approx(15));

  two.scenarios[0].probability = 0.3;
  two.scenarios[1].probability = 0.7;
  CHECK(mean_value_scenario(two).scenarios[0].fuel.at("coal")[0] == doctest::Approx(17));

  const auto once = mean_value_scenario(two);
  CHECK(mean_value_scenario(once) == once);

  ScenarioSet one;
  one.scenarios.push_back({"only", 1.0, {12, 13}, {}, {{"G1", {5, 6}}}});
  CHECK(mean_value_scenario(one) == one);
}

TEST_CASE("calendar and scenario files round-trip") {
  std::mt19937 rng(3);
  RepresentativeCalendar cal;
  cal.years.push_back(random_year(rng, 2));
  cal.years[0].demand_power["ITn"] = {std::vector<double>(kHours, 1.0), std::vector<double>(kHours, 2.0)};
  CHECK(load_calendar(save_calendar(cal)) == cal);
  CHECK(cal.year(2030).num_clusters() == 2);
  CHECK_THROWS_AS(cal.year(2031), std::out_of_range);

  ScenarioSet s;
  s.scenarios.push_back({"LC", 0.25, {1, 2}, {{"coal", {3, 4}}}, {{"G1", {5, 6}}}});
  s.scenarios.push_back({"HC", 0.75, {7, 8}, {{"coal", {9, 10}}}, {{"G1", {11, 12}}}});
  CHECK(load_scenarios(save_scenarios(s)) == s);

  CHECK_THROWS_AS(load_calendar("[1,2"), ParseError);
  CHECK_THROWS_AS(load_scenarios(R"({"scenarios": [{"id": "x"}]})"), SchemaError);
  CHECK_THROWS_AS(load_calendar(R"({"years": [{"year": 2030, "clusters": [{"id": "a", "weight": 365}],
                                   "day_map": ["b"]}]})"),
                  ReferenceError);
}
