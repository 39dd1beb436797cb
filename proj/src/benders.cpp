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

#include "gtep/benders.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <thread>

namespace gtep {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Runs fn(0..n-1) on up to `workers` threads. The first exception (by task
// index, so the report is deterministic) is rethrown after all tasks finish.
template <typename Fn>
void parallel_for(int n, int workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](int i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  workers = std::clamp(workers, 1, std::max(n, 1));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) run(i);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::shared_ptr<const SolverBackend> pick_backend(const BendersConfig& cfg) {
  return cfg.backend ? cfg.backend : default_backend();
}

std::string where(const ModelData& d, int yi, int wi) {
  return "year " + std::to_string(d.instance().years[yi]) + ", scenario " + d.scenarios().scenarios[wi].id;
}

// Round-off duals (|lambda| tiny relative to the largest one) wreck the
// master's scaling. Each is zeroed and the anchor value lowered by
// |lambda| * max |x - x_hat| over the column bounds, so the cut stays valid.
void drop_tiny_duals(CutAnchor& a, const LpProblem& master, const std::vector<int>& cols) {
  double big = 0;
  for (double l : a.lambda) big = std::max(big, std::abs(l));
  const double tiny = 1e-9 * big;
  for (size_t k = 0; k < a.lambda.size(); ++k) {
    const double l = std::abs(a.lambda[k]);
    if (l == 0 || l > tiny) continue;
    const double reach = std::max(a.x_hat[k] - master.col_lower[cols[k]], master.col_upper[cols[k]] - a.x_hat[k]);
    if (!std::isfinite(reach)) continue;
    a.z -= l * std::max(reach, 0.0);
    a.lambda[k] = 0;
  }
}

}  // namespace

Cut make_cut(int iteration, int scenario, std::vector<CutAnchor> anchors) {
  if (anchors.empty()) throw std::invalid_argument("a cut needs one anchor per year");
  for (const auto& a : anchors)
    if (a.lambda.size() != a.x_hat.size()) throw std::invalid_argument("cut anchor: lambda and x_hat differ in size");
  Cut c;
  c.iteration = iteration;
  c.scenario = scenario;
  c.years = std::move(anchors);
  return c;
}

double relative_gap(double z_lb, double z_ub) {
  if (z_ub == z_lb) return 0;
  if (!std::isfinite(z_ub) || !std::isfinite(z_lb)) return kInfinity;
  return (z_ub - z_lb) / std::max(std::abs(z_ub), 1e-300);
}

BendersState update_bounds(BendersState s, double z_lb_i, double investment,
                           const std::vector<std::vector<double>>& sub_costs, const std::vector<double>& pb,
                           const InvestmentPlan& x_i) {
  double z = investment;
  for (const auto& per_year : sub_costs)
    for (size_t w = 0; w < per_year.size(); ++w) z += pb.at(w) * per_year[w];
  s.z_lb = std::max(s.z_lb, z_lb_i);
  if (z < s.z_ub) {
    s.z_ub = z;
    s.x_best = x_i;
    s.best_iteration = s.iteration;
  }
  IterationRecord r;
  r.iteration = s.iteration;
  r.z_lb = s.z_lb;
  r.z_ub = s.z_ub;
  r.z_gtep = z;
  r.rel_gap = relative_gap(s.z_lb, s.z_ub);
  s.trace.push_back(r);
  return s;
}

std::vector<std::vector<OperationResult>> dispatch_plan(const ModelData& d, const InvestmentPlan& plan,
                                                        bool integer_uc, const BendersConfig& cfg) {
  const auto backend = pick_backend(cfg);
  const int Y = d.num_years(), W = d.num_scenarios();
  std::vector<std::vector<OperationResult>> out(Y, std::vector<OperationResult>(W));
  parallel_for(Y * W, cfg.parallelism, [&](int task) {
    const int yi = task / W, wi = task % W;
    BuildOptions o = cfg.build;
    o.relax_uc = !integer_uc;
    const SubProblem sp = build_subproblem(d, yi, wi, plan, o);
    OperationResult& r = out[yi][wi];
    r.year = yi;
    r.scenario = wi;
    r.x = sp.x;
    r.ops = sp.ops;
    r.col_names = std::make_shared<const std::vector<std::string>>(sp.lp.col_names);
    r.integer_uc = integer_uc;
    if (!integer_uc) {
      const auto s = backend->solve_lp(sp.lp, cfg.lp, nullptr);
      if (!s.optimal())
        throw SolverFailure("subproblem " + where(d, yi, wi) + ": " + to_string(s.status), d.instance().years[yi],
                            d.scenarios().scenarios[wi].id);
      r.values = s.primal;
      r.objective = s.objective;
      return;
    }
    auto relaxed = sp.lp;
    std::fill(relaxed.is_integer.begin(), relaxed.is_integer.end(), 0);
    const auto lp = backend->solve_lp(relaxed, cfg.lp, nullptr);
    Eigen::VectorXd hint;
    if (lp.optimal()) hint = commitment_hint(d, sp.x, sp.ops, lp.primal);
    const auto s = backend->solve_milp(sp.lp, cfg.final_mip, hint.size() ? &hint : nullptr);
    if (!s.has_solution())
      throw SolverFailure("final-pass dispatch " + where(d, yi, wi) + ": " + to_string(s.status),
                          d.instance().years[yi], d.scenarios().scenarios[wi].id);
    r.values = s.values;
    r.objective = s.objective;
    r.proven_optimal = s.optimal();
  });
  return out;
}

BendersResult run_benders(const ModelData& d, const BendersConfig& cfg) {
  if (!(cfg.eps >= 0)) throw std::invalid_argument("eps must be nonnegative");
  if (cfg.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  const auto t_start = Clock::now();
  const auto backend = pick_backend(cfg);
  const int Y = d.num_years(), W = d.num_scenarios();
  BuildOptions relaxed = cfg.build;
  relaxed.relax_uc = true;
  std::vector<double> pb;
  for (const auto& s : d.scenarios().scenarios) pb.push_back(s.probability);

  BendersResult res;
  BendersState st;
  st.eps = cfg.eps;
  st.max_iter = cfg.max_iter;

  MasterProblem master = build_master(d, {}, 1, relaxed);
  std::vector<std::unique_ptr<SubProblem>> subs(Y * W);
  std::vector<Basis> bases(Y * W);
  std::vector<std::vector<double>> costs(Y, std::vector<double>(W));
  std::vector<std::vector<std::vector<double>>> duals(Y, std::vector<std::vector<double>>(W));
  Eigen::VectorXd master_hint;

  for (int i = 1; i <= cfg.max_iter; ++i) {
    st.iteration = i;
    if (i == 2)
      for (int j : master.theta) {
        master.lp.col_lower[j] = -kInfinity;
        master.lp.col_upper[j] = kInfinity;
      }

    auto t0 = Clock::now();
    const auto ms = backend->solve_milp(master.lp, cfg.master, master_hint.size() ? &master_hint : nullptr);
    if (!ms.optimal()) throw SolverFailure(std::string("master problem: ") + to_string(ms.status), 0, "");
    const double master_ms = ms_since(t0);
    master_hint = ms.values;
    const double z_lb_i = std::min(ms.bound, ms.objective);
    const InvestmentPlan plan =
        extract_plan(master.lp, master.x, ms.values, d.instance().years, "master iteration " + std::to_string(i));
    double investment = 0;
    for (int yi = 0; yi < Y; ++yi)
      for (size_t k = 0; k < master.x[yi].cols.size(); ++k)
        investment += master.lp.cost[master.x[yi].cols[k]] * plan.values[yi][k];

    t0 = Clock::now();
    std::atomic<int> non_optimal{0};
    parallel_for(Y * W, cfg.parallelism, [&](int task) {
      const int yi = task / W, wi = task % W;
      auto& sp = subs[task];
      if (!sp) sp = std::make_unique<SubProblem>(build_subproblem(d, yi, wi, plan, relaxed));
      else pin_plan(*sp, plan.values[yi]);
      auto s = backend->solve_lp(sp->lp, cfg.lp, bases[task].empty() ? nullptr : &bases[task]);
      if (!s.optimal()) {
        ++non_optimal;
        throw SolverFailure("subproblem " + where(d, yi, wi) + " at master iteration " + std::to_string(i) + ": " +
                                to_string(s.status),
                            d.instance().years[yi], d.scenarios().scenarios[wi].id);
      }
      bases[task] = std::move(s.basis);
      costs[yi][wi] = s.objective;
      auto& lam = duals[yi][wi];
      lam.resize(sp->fix_rows.size());
      for (size_t k = 0; k < sp->fix_rows.size(); ++k) lam[k] = s.row_duals[sp->fix_rows[k]];
    });
    const double sub_ms = ms_since(t0);

    const int before = st.best_iteration;
    st = update_bounds(std::move(st), z_lb_i, investment, costs, pb, plan);
    if (st.best_iteration != before) {
      res.investment = investment;
      res.relaxed_costs = costs;
    }
    auto& rec = st.trace.back();
    rec.master_ms = master_ms;
    rec.subproblems_ms = sub_ms;
    rec.non_optimal_subproblems = non_optimal;

    for (int wi = 0; wi < W; ++wi) {
      std::vector<CutAnchor> anchors;
      for (int yi = 0; yi < Y; ++yi) {
        anchors.push_back({costs[yi][wi], plan.values[yi], duals[yi][wi]});
        drop_tiny_duals(anchors.back(), master.lp, master.x[yi].cols);
      }
      st.cuts.push_back(make_cut(i, wi, std::move(anchors)));
      add_cut_row(master, st.cuts.back());
    }

    if (rec.rel_gap <= cfg.eps) {
      res.converged = true;
      break;
    }
  }

  res.relaxed_total = st.z_ub;
  if (cfg.final_pass) {
    res.operations = dispatch_plan(d, st.x_best, true, cfg);
    res.final_pass = true;
    res.final_total = res.investment;
    for (int yi = 0; yi < Y; ++yi)
      for (int wi = 0; wi < W; ++wi) res.final_total += pb[wi] * res.operations[yi][wi].objective;
    res.final_gap = (res.final_total - res.relaxed_total) / std::max(std::abs(res.relaxed_total), 1e-300);
  } else {
    res.operations = dispatch_plan(d, st.x_best, false, cfg);
  }
  res.state = std::move(st);
  res.wall_ms = ms_since(t_start);
  return res;
}

void write_convergence_csv(const BendersState& s, std::ostream& out) {
  out << "iter,z_LB,z_UB,rel_gap,master_ms,subproblems_ms\n";
  out << std::setprecision(17);
  for (const auto& r : s.trace)
    out << r.iteration << ',' << r.z_lb << ',' << r.z_ub << ',' << r.rel_gap << ',' << r.master_ms << ','
        << r.subproblems_ms << '\n';
}

}  // namespace gtep
