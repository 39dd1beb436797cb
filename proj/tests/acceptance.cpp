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

// Acceptance run: one PASS/FAIL line per criterion, per-toy measurements
// above them. Exit status is nonzero iff a criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtep/analysis.hpp"
#include "gtep/milp.hpp"
#include "gtep/simplex.hpp"
#include "gtep/toy.hpp"
#include "random_problems.hpp"

using namespace gtep;
namespace fs = std::filesystem;

namespace {

constexpr int kToys = 20;
constexpr int kPlansPerToy = 10;

struct Criterion {
  const char* title;
  bool pass = true;
  int failures = 0;
  std::string first_failure;
  std::string summary;
  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (failures++ == 0) first_failure = what;
  }
};

std::array<Criterion, 10> crit = {{{"oracle equivalence"},
                                   {"bound discipline"},
                                   {"cut validity"},
                                   {"no infeasible subproblems"},
                                   {"physics residuals"},
                                   {"final-pass integrality gap"},
                                   {"value of the stochastic solution"},
                                   {"solver kernel"},
                                   {"reference values"},
                                   {"determinism"}}};
Criterion& C(int n) { return crit[n - 1]; }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// First-stage feasible plans: the iteration-1 master (theta fixed at 0) under
// random objective directions.
std::vector<InvestmentPlan> random_plans(const ModelData& d, std::mt19937& rng, int count) {
  const MasterProblem base = build_master(d, {}, 1);
  std::uniform_real_distribution<double> sym(-1, 1), pos(0, 1);
  std::vector<InvestmentPlan> plans;
  for (int k = 0; k < count; ++k) {
    LpProblem lp = base.lp;
    for (const auto& x : base.x)
      for (int j : x.cols) lp.cost[j] = std::isfinite(lp.col_upper[j]) ? sym(rng) : pos(rng);
    const auto s = solve_milp(lp);
    C(3).check(s.optimal(), "random plan master not optimal");
    if (!s.optimal()) continue;
    plans.push_back(extract_plan(lp, base.x, s.values, d.instance().years, "random " + std::to_string(k)));
  }
  return plans;
}

void check_block_physics(const ModelData& d, const FirstStageRefs& x, const OperationRefs& ops,
                         const Eigen::VectorXd& v, bool integer, const std::string& where, double& worst) {
  const auto p = check_physics(d, x, ops, v);
  worst = std::max(worst, p.max_residual());
  C(5).check(p.max_residual() <= 1e-6, where + ": residual " + fmt("%.3g", p.max_residual()));
  if (integer) C(5).check(p.uc_integrality <= 1e-6, where + ": UC integrality " + fmt("%.3g", p.uc_integrality));
}

void run_toy(int seed, double& worst_phys, double& worst_gap, double& worst_cut, int& cut_checks, double& min_vss) {
  const auto t = generate_toy(seed);
  const ModelData d(t.instance, t.calendar, t.scenarios);
  const std::string tag = "toy " + std::to_string(seed);
  const int Y = d.num_years(), W = d.num_scenarios();

  BendersConfig cfg;
  cfg.parallelism = 1;
  cfg.eps = 1e-3;
  cfg.build.relax_uc = true;
  BendersConfig exact = cfg;
  exact.master.mip_gap = 1e-9;

  BendersResult r;
  SolveOutcome mono;
  try {
    r = run_benders(d, cfg);
    mono = solve_gtep(d, Method::kMonolithic, exact);
  } catch (const SolverFailure& e) {
    C(1).check(false, tag + ": " + e.what());
    C(4).check(false, tag + ": " + e.what());
    return;
  }
  const auto& st = r.state;
  const double secs = r.wall_ms / 1000;
  const double gap = st.trace.back().rel_gap;

  // 1. Oracle equivalence.
  C(1).check(r.converged && gap <= 1e-3, tag + ": not converged, gap " + fmt("%.3g", gap));
  C(1).check(mono.converged, tag + ": monolithic oracle not optimal");
  const double dz = std::abs(st.z_ub - mono.objective) / std::abs(mono.objective);
  C(1).check(dz <= 1e-3, tag + ": |z_UB - z*| / z* = " + fmt("%.3g", dz));
  C(1).check(secs < 60, tag + ": " + fmt("%.1f s", secs));

  // 2. Bound discipline.
  for (size_t i = 0; i < st.trace.size(); ++i) {
    const auto& rec = st.trace[i];
    C(2).check(rec.z_lb <= rec.z_ub + 1e-6 * (1 + std::abs(rec.z_ub)), tag + ": LB > UB at " + std::to_string(i + 1));
    if (i > 0) {
      C(2).check(rec.z_lb >= st.trace[i - 1].z_lb, tag + ": LB decreased at " + std::to_string(i + 1));
      C(2).check(rec.z_ub <= st.trace[i - 1].z_ub, tag + ": UB increased at " + std::to_string(i + 1));
    }
    // 4. Subproblem statuses of the iterations.
    C(4).check(rec.non_optimal_subproblems == 0, tag + ": non-optimal subproblem at " + std::to_string(i + 1));
  }

  // 3. Cut validity at random plans (and 5. physics of those dispatches).
  std::mt19937 rng(1000 + seed);
  auto plans = random_plans(d, rng, kPlansPerToy);
  C(3).check(static_cast<int>(plans.size()) == kPlansPerToy, tag + ": too few random plans");
  std::vector<std::unique_ptr<SubProblem>> subs(Y * W);
  std::vector<Basis> bases(Y * W);
  for (const auto& plan : plans) {
    C(3).check(check_plan(d, plan).empty(), tag + ": random plan violates the first stage");
    std::vector<double> cost(W, 0.0);
    for (int yi = 0; yi < Y; ++yi)
      for (int wi = 0; wi < W; ++wi) {
        auto& sp = subs[yi * W + wi];
        if (!sp) sp = std::make_unique<SubProblem>(build_subproblem(d, yi, wi, plan));
        else pin_plan(*sp, plan.values[yi]);
        auto& basis = bases[yi * W + wi];
        auto s = solve_lp(sp->lp, cfg.lp, basis.empty() ? nullptr : &basis);
        C(4).check(s.optimal(), tag + ": " + to_string(s.status) + " subproblem at " + plan.provenance);
        if (!s.optimal()) continue;
        basis = std::move(s.basis);
        cost[wi] += s.objective;
        check_block_physics(d, sp->x, sp->ops, s.primal, false, tag + " " + plan.provenance, worst_phys);
      }
    for (const auto& cut : st.cuts) {
      const double z = cost[cut.scenario], lhs = cut.evaluate(plan.values);
      const double excess = (lhs - z) / (1 + std::abs(z));
      worst_cut = std::max(worst_cut, excess);
      ++cut_checks;
      C(3).check(excess <= 1e-6, tag + ": cut " + std::to_string(cut.iteration) + " over-estimates by " +
                                     fmt("%.3g", excess) + " at " + plan.provenance);
    }
  }

  // 5. Physics of the integer final pass and of the monolithic solution; 6. final gap.
  for (const auto& per_year : r.operations)
    for (const auto& op : per_year)
      check_block_physics(d, op.x, op.ops, op.values, true, tag + " final pass", worst_phys);
  for (const auto& per_year : mono.operations)
    for (const auto& op : per_year)
      check_block_physics(d, op.x, op.ops, op.values, false, tag + " monolithic", worst_phys);
  worst_gap = std::max(worst_gap, r.final_gap);
  C(6).check(r.final_pass && r.final_gap <= 0.05, tag + ": final gap " + fmt("%.4f", r.final_gap));

  // 7. VSS with the exact monolithic stochastic plan, relaxed UC.
  double vss = 0, stoch = 0;
  try {
    const auto se = evaluate_plan(d, mono.plan, UcMode::kRelaxed, exact);
    const auto mvp = solve_mvp(d, Method::kMonolithic, exact);
    const auto me = evaluate_plan(d, mvp.plan, UcMode::kRelaxed, exact);
    const auto rep = vss_report(se, me);
    vss = rep.vss;
    stoch = rep.stoch_total;
    min_vss = std::min(min_vss, vss / (1 + std::abs(stoch)));
    C(7).check(vss >= -1e-6 * (1 + std::abs(stoch)), tag + ": VSS " + fmt("%.6g", vss));
  } catch (const std::exception& e) {
    C(7).check(false, tag + ": " + e.what());
  }

  std::printf(
      "%-7s Y=%d W=%d  iters=%2d  gap=%.2e  z_UB=%.10g  z*=%.10g  |dz|/z*=%.2e  %.1f s  final_gap=%.4f%s  "
      "VSS=%.6g (%.3g%%)\n",
      tag.c_str(), Y, W, st.iteration, gap, st.z_ub, mono.objective, dz, secs, r.final_gap,
      r.operations.empty() || !r.operations[0][0].proven_optimal ? "*" : "", vss, 100 * vss / std::max(1.0, stoch));
  std::fflush(stdout);
}

void identical_scenarios() {
  for (int seed : {1, 2, 3}) {
    ToyOptions o;
    o.identical_scenarios = true;
    const auto t = generate_toy(seed, o);
    const ModelData d(t.instance, t.calendar, t.scenarios);
    BendersConfig exact;
    exact.parallelism = 1;
    exact.build.relax_uc = true;
    exact.master.mip_gap = 1e-9;
    const auto run = run_vss(d, Method::kMonolithic, UcMode::kRelaxed, exact);
    const double tol = 1e-6 * (1 + std::abs(run.report.stoch_total));
    std::printf("identical-scenario toy %d: VSS=%.6g (tolerance %.3g)\n", seed, run.report.vss, tol);
    C(7).check(std::abs(run.report.vss) <= tol, "identical-scenario toy " + std::to_string(seed) + ": VSS " +
                                                    fmt("%.6g", run.report.vss));
  }
}

void kernel() {
  std::mt19937 rng(20260101);
  int lps = 0, milps = 0;
  double worst_lp = 0, worst_dual = 0, worst_milp = 0;
  for (int trial = 0; lps < 200 && trial < 5000; ++trial) {
    const LpProblem p = testing::random_lp(rng, 1 + trial % 6, trial % 9);
    const auto oracle = testing::vertex_oracle(p);
    const auto s = solve_lp(p);
    if (!oracle) {
      C(8).check(s.status == LpStatus::kInfeasible, "LP " + std::to_string(trial) + ": infeasibility not detected");
      continue;
    }
    ++lps;
    C(8).check(s.optimal(), "LP " + std::to_string(trial) + ": " + to_string(s.status));
    if (!s.optimal()) continue;
    const double err = std::abs(s.objective - *oracle);
    const auto res = lp_residuals(p, s);
    worst_lp = std::max(worst_lp, err);
    worst_dual = std::max(worst_dual, static_cast<double>(res.duality_gap));
    C(8).check(err <= 1e-8, "LP " + std::to_string(trial) + ": objective off by " + fmt("%.3g", err));
    C(8).check(res.duality_gap <= 1e-6, "LP " + std::to_string(trial) + ": duality gap " + fmt("%.3g", res.duality_gap));
  }
  SolverOptions zero_gap;
  zero_gap.mip_gap = 0;
  for (int trial = 0; milps < 100 && trial < 1000; ++trial) {
    const LpProblem p = testing::random_milp(rng, 2 + trial % 11, trial % 4, 1 + trial % 5);
    const auto o = enumerate_oracle(p, zero_gap);
    const auto s = solve_milp(p, zero_gap);
    if (!o.optimal()) {
      C(8).check(s.status == o.status, "MILP " + std::to_string(trial) + ": status differs from the oracle");
      continue;
    }
    ++milps;
    C(8).check(s.optimal(), "MILP " + std::to_string(trial) + ": " + to_string(s.status));
    if (!s.optimal()) continue;
    const double err = std::abs(s.objective - o.objective);
    worst_milp = std::max(worst_milp, err);
    C(8).check(err <= 1e-8, "MILP " + std::to_string(trial) + ": objective off by " + fmt("%.3g", err));
  }
  C(8).check(lps == 200 && milps == 100, "too few feasible random problems");
  C(8).summary = std::to_string(lps) + " LPs (max err " + fmt("%.2g", worst_lp) + ", max duality gap " +
                 fmt("%.2g", worst_dual) + "), " + std::to_string(milps) + " MILPs (max err " + fmt("%.2g", worst_milp) +
                 ")";
}

void reference_values() {
  ThermalCluster gas;
  gas.fuel = "gas";
  gas.om_cost = 2;
  gas.co2_rate = 0.35;
  gas.heat_rate = 1.9;
  Scenario w{"w", 1, {40}, {}, {}};
  const double mg = marginal_cost(gas, 0, w);
  ThermalCluster coal;
  coal.fuel = "coal";
  coal.heat_rate = 2.937;
  w.co2 = {25};
  w.fuel["coal"] = {9.79};
  const double mc = marginal_cost(coal, 0, w);
  const auto cal = generate_toy(1).calendar.years[0];
  const int checkpoints = expand_checkpoints(cal, 7).num_checkpoints;
  C(9).check(std::abs(mg - 16.0) <= 1e-9, "gas marginal cost " + fmt("%.12g", mg));
  C(9).check(std::abs(std::round(mc * 1000) / 1000 - 28.753) <= 1e-12, "coal marginal cost " + fmt("%.12g", mc));
  C(9).check(checkpoints == 52, "M = 7 gives " + std::to_string(checkpoints) + " checkpoints");
  C(9).summary = fmt("gas %.12g, coal %.12g (28.753 to three decimals), ", mg, mc) + "M = 7: " +
                 std::to_string(checkpoints) + " checkpoints";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The lines of summary.json carrying objective values, verbatim.
std::string objective_lines(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string out;
  for (std::string line; std::getline(in, line);)
    if (line.find("\"objective\"") != std::string::npos || line.find("\"relaxed_objective\"") != std::string::npos ||
        line.find("\"gap\"") != std::string::npos || line.find("\"final_gap\"") != std::string::npos)
      out += line + "\n";
  return out;
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / ("gtep_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::string toy = std::string(GTEP_DATA_DIR) + "/toy2z/";
  const std::string gen = (root / "gen").string();
  const int gen_status =
      std::system((std::string(GTEP_CLI_PATH) + " generate --seed 11 --out " + gen + " 2>/dev/null").c_str());
  C(10).check(WIFEXITED(gen_status) && WEXITSTATUS(gen_status) == 0, "toy generation failed");
  const std::vector<std::pair<std::string, std::string>> inputs = {
      {"toy2z", toy + "toy2z.json " + toy + "toy2z_calendar.json " + toy + "toy2z_scenarios.json"},
      {"toy 11", gen + "/instance.json " + gen + "/calendar.json " + gen + "/scenarios.json"}};
  int compared = 0;
  for (const auto& [name, triple] : inputs) {
    std::string runs[2];
    for (int k = 0; k < 2; ++k) {
      const auto out = root / (name.substr(0, 3) + std::to_string(compared) + "_" + std::to_string(k));
      const int status = std::system((std::string(GTEP_CLI_PATH) + " solve " + triple +
                                      " --parallelism 1 --out " + out.string() + " 2>/dev/null")
                                         .c_str());
      C(10).check(WIFEXITED(status) && WEXITSTATUS(status) == 0, name + ": solve failed");
      runs[k] = objective_lines(out / "summary.json");
    }
    C(10).check(!runs[0].empty() && runs[0] == runs[1], name + ": summary.json objectives differ");
    ++compared;
  }
  fs::remove_all(root);
  C(10).summary = std::to_string(compared) + " instances solved twice (benders, integer final pass), objectives byte-identical";
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  double worst_phys = 0, worst_gap = -1, worst_cut = -kInfinity, min_vss = kInfinity;
  int cut_checks = 0;
  for (int seed = 1; seed <= kToys; ++seed) run_toy(seed, worst_phys, worst_gap, worst_cut, cut_checks, min_vss);
  identical_scenarios();
  kernel();
  reference_values();
  determinism();

  C(1).summary = std::to_string(kToys) + " toys, Benders eps 1e-3 vs monolithic oracle within 1e-3, < 60 s each";
  C(2).summary = "LB nondecreasing, UB nonincreasing, LB <= UB + 1e-6(1+|UB|) on every iteration";
  C(3).summary = std::to_string(cut_checks) + " cut checks at " + std::to_string(kPlansPerToy) +
                 " random feasible plans per toy, max relative excess " + fmt("%.3g", worst_cut);
  C(4).summary = "every Benders, random-plan and final-pass subproblem optimal";
  C(5).summary = "max residual " + fmt("%.3g", worst_phys);
  C(6).summary = "max final-pass gap " + fmt("%.4f", worst_gap);
  C(7).summary = "min VSS/(1+|stoch|) " + fmt("%.3g", min_vss) + "; identical-scenario toys 0 within tolerance";

  bool all = true;
  std::printf("\n");
  for (int n = 1; n <= 10; ++n) {
    const auto& c = C(n);
    all = all && c.pass;
    std::printf("%s criterion %d (%s): %s", c.pass ? "PASS" : "FAIL", n, c.title, c.summary.c_str());
    if (!c.pass) std::printf(" -- %d failure(s), first: %s", c.failures, c.first_failure.c_str());
    std::printf("\n");
  }
  std::printf("total %.0f s\n", std::chrono::duration<double>(Clock::now() - t0).count());
  return all ? 0 : 1;
}
