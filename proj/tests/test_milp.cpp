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
#include <random>

#include "gtep/milp.hpp"
#include "gtep/simplex.hpp"
#include "random_problems.hpp"

using namespace gtep;
using namespace gtep::testing;

namespace {

LpProblem knapsack() {
  // max 3a + 2b  s.t. a + b <= 1, a, b binary
  LpProblem p;
  p.add_column(-3, 0, 1, true);
  p.add_column(-2, 0, 1, true);
  p.add_row(RowSense::kLessEqual, 1, {{0, 1.0}, {1, 1.0}});
  return p;
}

bool integral(const LpProblem& p, const Eigen::VectorXd& x, double tol) {
  for (int j = 0; j < p.num_cols(); ++j)
    if (p.is_integer[j] && std::abs(x[j] - std::round(x[j])) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("binary knapsack") {
  const auto s = solve_milp(knapsack());
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(-3));
  CHECK(s.values[0] == 1);
  CHECK(s.values[1] == 0);
  CHECK(enumerate_oracle(knapsack()).objective == doctest::Approx(-3));
}

TEST_CASE("integral relaxation needs no branching") {
  LpProblem p;
  p.add_column(1, 0, 10, true);
  p.add_column(2, 0, 10, true);
  p.add_row(RowSense::kGreaterEqual, 3, {{0, 1.0}, {1, 1.0}});
  const auto s = solve_milp(p);
  REQUIRE(s.optimal());
  CHECK(s.nodes == 1);
  CHECK(s.objective == doctest::Approx(solve_lp(p).objective));
}

TEST_CASE("conflicting equalities are infeasible") {
  LpProblem p;
  p.add_column(1, 0, 1, true);
  p.add_row(RowSense::kEqual, 1, {{0, 1.0}});
  p.add_row(RowSense::kEqual, 0, {{0, 1.0}});
  CHECK(solve_milp(p).status == MilpStatus::kInfeasible);
  CHECK(enumerate_oracle(p).status == MilpStatus::kInfeasible);
}

TEST_CASE("oracle delegates pure LPs and rejects large spaces") {
  LpProblem p;
  p.add_column(1, 0, kInf<double>);
  p.add_row(RowSense::kGreaterEqual, 1, {{0, 1.0}});
  const auto s = enumerate_oracle(p);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(1));

  LpProblem wide;
  wide.add_column(1, 0, 5, true);
  CHECK_THROWS_AS(enumerate_oracle(wide), EnumerationSizeError);
  LpProblem many;
  for (int j = 0; j < 21; ++j) many.add_column(1, 0, 1, true);
  CHECK_THROWS_AS(enumerate_oracle(many), EnumerationSizeError);
}

TEST_CASE("three binaries, seed 42") {
  std::mt19937 rng(42);
  const LpProblem p = random_milp(rng, 3, 0, 2);
  const auto o = enumerate_oracle(p);
  const auto s = solve_milp(p);
  REQUIRE(o.status == s.status);
  if (o.optimal()) CHECK(std::abs(o.objective - s.objective) <= 1e-8);
}

TEST_CASE("random MILPs agree with enumeration") {
  std::mt19937 rng(2024);
  SolverOptions exact;
  exact.mip_gap = 0;
  int compared = 0, infeasible = 0;
  for (int trial = 0; compared < 100 && trial < 1000; ++trial) {
    const int nbin = 2 + trial % 11;  // up to 12 binaries
    const LpProblem p = random_milp(rng, nbin, trial % 4, 1 + trial % 5);
    const auto o = enumerate_oracle(p, exact);
    const auto s = solve_milp(p, exact);
    if (!o.optimal()) {
      CHECK(s.status == o.status);
      ++infeasible;
      continue;
    }
    REQUIRE(s.optimal());
    CHECK(std::abs(o.objective - s.objective) <= 1e-8);
    CHECK(integral(p, s.values, 1e-6));
    CHECK(s.gap <= 1e-9);
    ++compared;
  }
  CHECK(compared == 100);
}

TEST_CASE("general integers and the incumbent hint") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    LpProblem p;
    for (int j = 0; j < 5; ++j) p.add_column(std::round(u(rng) * 10) / 10, -2, 2, j < 4);
    for (int i = 0; i < 3; ++i) {
      std::vector<std::pair<int, double>> t;
      for (int j = 0; j < 5; ++j) t.emplace_back(j, std::round(u(rng) * 10) / 10);
      p.add_row(RowSense::kLessEqual, 1 + std::abs(u(rng)), t);
    }
    const auto o = enumerate_oracle(p);
    REQUIRE(o.optimal());  // zero is always feasible
    const auto s = solve_milp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective <= o.objective + 1e-6 * std::max(1.0, std::abs(o.objective)));
    CHECK(s.objective >= o.objective - 1e-8);
    const auto h = solve_milp(p, {}, &o.values);
    REQUIRE(h.optimal());
    CHECK(h.objective <= o.objective + 1e-6 * std::max(1.0, std::abs(o.objective)));
    CHECK(h.gap <= 1e-6);
  }
}
