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

#include "gtep/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gtep/backend.hpp"

namespace gtep {
namespace {

using nlohmann::ordered_json;

const std::set<std::string> kAdditionSymbols = {"delta_L", "delta_J", "delta_H", "N_plus", "N_minus",
                                                "S",       "W",       "B_CAP",   "PtG_CAP"};

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Scenario indices sorted by id: the summation order of every expected value.
std::vector<int> id_order(const ModelData& d) {
  std::vector<int> idx(d.num_scenarios());
  std::iota(idx.begin(), idx.end(), 0);
  const auto& s = d.scenarios().scenarios;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s[a].id < s[b].id; });
  return idx;
}

void add_slacks(SlackTotals& into, const SlackTotals& s, double w) {
  into.energy_not_supplied += w * s.energy_not_supplied;
  into.overgeneration += w * s.overgeneration;
  into.reserve_not_supplied += w * s.reserve_not_supplied;
  into.gas_curtailment += w * s.gas_curtailment;
}

std::vector<int> operation_columns(const OperationRefs& o) {
  std::vector<int> cols;
  for (const IndexGrid* g : {&o.alpha, &o.beta, &o.gamma, &o.p, &o.h_out, &o.h_in, &o.h_spill, &o.bat, &o.bat_in,
                             &o.bat_out, &o.f_line, &o.og, &o.enp, &o.rnp, &o.g_ptg, &o.g_sup, &o.g_in, &o.g_out,
                             &o.g_curt, &o.f_pipe})
    for (int j : g->v)
      if (j >= 0) cols.push_back(j);
  for (const auto* lt : {&o.h_lt, &o.g_lt})
    for (const auto& row : *lt)
      for (int j : row)
        if (j >= 0) cols.push_back(j);
  std::sort(cols.begin(), cols.end());
  return cols;
}

ordered_json slacks_json(const SlackTotals& s) {
  return {{"energy_not_supplied", s.energy_not_supplied},
          {"overgeneration", s.overgeneration},
          {"reserve_not_supplied", s.reserve_not_supplied},
          {"gas_curtailment", s.gas_curtailment}};
}

ordered_json costs_json(const CostBreakdown& c) {
  ordered_json j = ordered_json::object();
  for (int t = 0; t < kNumCostTerms; ++t) j[to_string(static_cast<CostTerm>(t))] = c.terms[t];
  return j;
}

ordered_json plan_json(const InvestmentPlan& p) {
  ordered_json years = ordered_json::array();
  for (size_t y = 0; y < p.years.size(); ++y) {
    ordered_json v = ordered_json::object();
    for (size_t i = 0; i < p.labels[y].size(); ++i) v[p.labels[y][i]] = p.values[y][i];
    years.push_back({{"year", p.years[y]}, {"values", v}});
  }
  return {{"provenance", p.provenance}, {"years", years}};
}

// Label with its year index removed: N_plus[k=CCGT,y=2030] -> N_plus[k=CCGT].
std::string without_year(const ParsedLabel& l) {
  std::string s = l.symbol + "[";
  bool first = true;
  for (const auto& [k, v] : l.indices) {
    if (k == "y") continue;
    if (!first) s += ',';
    s += k + "=" + v;
    first = false;
  }
  return s + "]";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

const char* to_string(UcMode m) { return m == UcMode::kRelaxed ? "relaxed" : "integer"; }
const char* to_string(Method m) { return m == Method::kBenders ? "benders" : "monolithic"; }

Method parse_method(const std::string& s) {
  if (s == "benders") return Method::kBenders;
  if (s == "monolithic") return Method::kMonolithic;
  throw std::invalid_argument("unknown method '" + s + "' (expected benders or monolithic)");
}

std::string provenance_digest(const ModelData& d) {
  std::uint64_t h = 14695981039346656037ULL;
  h = fnv1a(h, save_instance(d.instance()));
  h = fnv1a(h, std::string(1, '\0'));
  h = fnv1a(h, save_calendar(d.calendar_set()));
  h = fnv1a(h, std::string(1, '\0'));
  h = fnv1a(h, save_scenarios(d.scenarios()));
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

PlanEvaluation summarize_operations(const ModelData& d, const InvestmentPlan& plan, UcMode uc,
                                    const std::vector<std::vector<OperationResult>>& ops, const BuildOptions& build) {
  const int Y = d.num_years(), W = d.num_scenarios();
  if (static_cast<int>(ops.size()) != Y) throw std::invalid_argument("operations do not cover every year");
  PlanEvaluation e;
  e.digest = provenance_digest(d);
  e.provenance = plan.provenance;
  e.uc = uc;
  e.plan = plan;
  e.investment = investment_cost(d, plan);
  for (const auto& s : d.scenarios().scenarios) e.scenarios.push_back({s.id, s.probability, {}, {}});
  e.block_costs.assign(Y, std::vector<double>(W, 0.0));
  for (int yi = 0; yi < Y; ++yi) {
    if (static_cast<int>(ops[yi].size()) != W) throw std::invalid_argument("operations do not cover every scenario");
    for (int wi = 0; wi < W; ++wi) {
      const auto& op = ops[yi][wi];
      const CostBreakdown b = operating_costs(d, op.ops, op.values, build);
      auto& sc = e.scenarios[wi];
      for (int t = 0; t < kNumCostTerms; ++t) sc.costs.terms[t] += b.terms[t];
      add_slacks(sc.slacks, slack_totals(d, op.ops, op.values), 1.0);
      e.block_costs[yi][wi] = op.objective;
      e.proven_optimal = e.proven_optimal && op.proven_optimal;
    }
  }
  for (int wi : id_order(d)) {
    const auto& sc = e.scenarios[wi];
    e.expected_operations += sc.probability * sc.total();
    add_slacks(e.expected_slacks, sc.slacks, sc.probability);
  }
  e.expected_total = e.investment + e.expected_operations;
  return e;
}

PlanEvaluation evaluate_plan(const ModelData& d, const InvestmentPlan& plan, UcMode uc, const BendersConfig& cfg) {
  const auto bad = check_plan(d, plan);
  if (!bad.empty()) {
    std::string msg = "infeasible plan";
    for (size_t i = 0; i < bad.size() && i < 5; ++i) msg += (i ? "; " : ": ") + bad[i];
    if (bad.size() > 5) msg += "; ... (" + std::to_string(bad.size()) + " violations)";
    throw InfeasiblePlanError(msg);
  }
  const auto ops = dispatch_plan(d, plan, uc == UcMode::kInteger, cfg);
  return summarize_operations(d, plan, uc, ops, cfg.build);
}

SolveOutcome solve_gtep(const ModelData& d, Method method, const BendersConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.method = method;
  out.uc = cfg.build.relax_uc ? UcMode::kRelaxed : UcMode::kInteger;
  if (method == Method::kBenders) {
    BendersConfig c = cfg;
    c.final_pass = !cfg.build.relax_uc;
    BendersResult r = run_benders(d, c);
    out.plan = r.state.x_best;
    out.plan.provenance = "benders x_best (iteration " + std::to_string(r.state.best_iteration) + ")";
    out.relaxed_objective = r.relaxed_total;
    out.objective = r.final_pass ? r.final_total : r.relaxed_total;
    out.gap = r.state.trace.empty() ? kInfinity : r.state.trace.back().rel_gap;
    out.iterations = r.state.iteration;
    out.converged = r.converged;
    out.operations = std::move(r.operations);
    r.operations.clear();
    out.benders = std::move(r);
  } else {
    const auto backend = cfg.backend ? cfg.backend : default_backend();
    const MonolithicProblem m = build_monolithic(d, cfg.build);
    const auto s = backend->solve_milp(m.lp, cfg.master, nullptr);
    if (!s.has_solution()) throw SolverFailure(std::string("monolithic problem: ") + to_string(s.status), 0, "");
    out.plan = extract_plan(m.lp, m.x, s.values, d.instance().years, "monolithic");
    out.objective = s.objective;
    out.relaxed_objective = cfg.build.relax_uc ? s.objective : std::nan("");
    out.gap = s.gap;
    out.iterations = static_cast<int>(s.nodes);
    out.converged = s.optimal();
    const auto names = std::make_shared<const std::vector<std::string>>(m.lp.col_names);
    out.operations.assign(d.num_years(), std::vector<OperationResult>(d.num_scenarios()));
    for (int yi = 0; yi < d.num_years(); ++yi)
      for (int wi = 0; wi < d.num_scenarios(); ++wi) {
        auto& r = out.operations[yi][wi];
        r.year = yi;
        r.scenario = wi;
        r.x = m.x[yi];
        r.ops = m.ops[yi][wi];
        r.values = s.values;
        r.col_names = names;
        r.objective = operating_costs(d, r.ops, r.values, cfg.build).total();
        r.integer_uc = !cfg.build.relax_uc;
        r.proven_optimal = s.optimal();
      }
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SolveOutcome solve_mvp(const ModelData& d, Method method, const BendersConfig& cfg) {
  const ModelData mv(d.instance(), d.calendar_set(), mean_value_scenario(d.scenarios()));
  SolveOutcome s = solve_gtep(mv, method, cfg);
  s.plan.provenance = std::string("mean-value problem, ") + to_string(method);
  return s;
}

double compute_vss(double stoch_objective, const std::string& stoch_digest, const PlanEvaluation& mvp_eval) {
  if (stoch_digest != mvp_eval.digest)
    throw MismatchedInputsError("VSS inputs come from different data (digest " + stoch_digest + " vs " +
                                mvp_eval.digest + ")");
  return mvp_eval.expected_total - stoch_objective;
}

VssReport vss_report(const PlanEvaluation& stoch_eval, const PlanEvaluation& mvp_eval) {
  if (stoch_eval.uc != mvp_eval.uc)
    throw MismatchedInputsError(std::string("VSS inputs use different UC modes (") + to_string(stoch_eval.uc) +
                                " vs " + to_string(mvp_eval.uc) + ")");
  VssReport r;
  r.uc = stoch_eval.uc;
  r.vss = compute_vss(stoch_eval.expected_total, stoch_eval.digest, mvp_eval);
  r.stoch_total = stoch_eval.expected_total;
  r.mvp_expected_total = mvp_eval.expected_total;
  r.vss_pct = r.mvp_expected_total != 0 ? r.vss / r.mvp_expected_total : 0;
  return r;
}

VssRun run_vss(const ModelData& d, Method method, UcMode uc, const BendersConfig& cfg) {
  BendersConfig c = cfg;
  c.build.relax_uc = uc == UcMode::kRelaxed;
  VssRun r;
  r.stochastic = solve_gtep(d, method, c);
  r.stoch_eval = evaluate_plan(d, r.stochastic.plan, uc, c);
  r.mean_value = solve_mvp(d, method, c);
  r.mvp_eval = evaluate_plan(d, r.mean_value.plan, uc, c);
  r.report = vss_report(r.stoch_eval, r.mvp_eval);
  return r;
}

void write_plan_csv(const InvestmentPlan& plan, std::ostream& out) {
  std::vector<std::string> columns;
  std::vector<std::map<std::string, double>> rows(plan.years.size());
  for (size_t y = 0; y < plan.years.size(); ++y)
    for (size_t i = 0; i < plan.labels[y].size(); ++i) {
      const auto l = parse_label(plan.labels[y][i]);
      if (!kAdditionSymbols.count(l.symbol)) continue;
      const auto key = without_year(l);
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
      rows[y][key] = plan.values[y][i];
    }
  out << "year";
  for (const auto& c : columns) out << ',' << csv_field(c);
  out << '\n' << std::setprecision(17);
  for (size_t y = 0; y < plan.years.size(); ++y) {
    out << plan.years[y];
    for (const auto& c : columns) {
      const auto it = rows[y].find(c);
      out << ',' << (it == rows[y].end() ? 0.0 : it->second);
    }
    out << '\n';
  }
}

void write_costs_csv(const PlanEvaluation& e, std::ostream& out) {
  out << "term";
  for (const auto& s : e.scenarios) out << ',' << csv_field(s.id);
  out << ",expected\n" << std::setprecision(17);
  std::vector<int> order(e.scenarios.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return e.scenarios[a].id < e.scenarios[b].id; });
  for (int t = 0; t < kNumCostTerms; ++t) {
    out << to_string(static_cast<CostTerm>(t));
    double expected = 0;
    for (const auto& s : e.scenarios) out << ',' << s.costs.terms[t];
    for (int w : order) expected += e.scenarios[w].probability * e.scenarios[w].costs.terms[t];
    out << ',' << expected << '\n';
  }
  out << "operations";
  for (const auto& s : e.scenarios) out << ',' << s.total();
  out << ',' << e.expected_operations << "\ninvestment";
  for (size_t w = 0; w < e.scenarios.size(); ++w) out << ',' << e.investment;
  out << ',' << e.investment << "\ntotal";
  for (const auto& s : e.scenarios) out << ',' << e.investment + s.total();
  out << ',' << e.expected_total << '\n';
}

void write_evaluation_json(const PlanEvaluation& e, std::ostream& out) {
  ordered_json scen = ordered_json::array();
  for (const auto& s : e.scenarios)
    scen.push_back({{"id", s.id},
                    {"probability", s.probability},
                    {"total", s.total()},
                    {"costs", costs_json(s.costs)},
                    {"slacks", slacks_json(s.slacks)}});
  ordered_json blocks = ordered_json::array();
  for (size_t y = 0; y < e.block_costs.size(); ++y)
    for (size_t w = 0; w < e.block_costs[y].size(); ++w)
      blocks.push_back({{"year", e.plan.years.at(y)}, {"scenario", e.scenarios[w].id}, {"cost", e.block_costs[y][w]}});
  const ordered_json j = {{"digest", e.digest},
                          {"provenance", e.provenance},
                          {"uc", to_string(e.uc)},
                          {"investment", e.investment},
                          {"expected_operations", e.expected_operations},
                          {"expected_total", e.expected_total},
                          {"expected_slacks", slacks_json(e.expected_slacks)},
                          {"proven_optimal", e.proven_optimal},
                          {"scenarios", scen},
                          {"blocks", blocks},
                          {"plan", plan_json(e.plan)}};
  out << j.dump(2) << '\n';
}

void write_vss_json(const VssReport& r, std::ostream& out) {
  const ordered_json j = {{"uc", to_string(r.uc)},
                          {"stoch_total", r.stoch_total},
                          {"mvp_expected_total", r.mvp_expected_total},
                          {"vss", r.vss},
                          {"vss_pct", r.vss_pct}};
  out << j.dump(2) << '\n';
}

void write_solution_json(const ModelData& d, const SolveOutcome& s, std::ostream& out) {
  ordered_json ops = ordered_json::array();
  for (const auto& per_year : s.operations)
    for (const auto& op : per_year) {
      ordered_json v = ordered_json::object();
      if (op.col_names)
        for (int j : operation_columns(op.ops))
          if (op.values[j] != 0) v[(*op.col_names)[j]] = op.values[j];
      ops.push_back({{"year", d.instance().years[op.year]},
                     {"scenario", d.scenarios().scenarios[op.scenario].id},
                     {"integer_uc", op.integer_uc},
                     {"proven_optimal", op.proven_optimal},
                     {"objective", op.objective},
                     {"values", v}});
    }
  const ordered_json j = {{"method", to_string(s.method)},
                          {"uc", to_string(s.uc)},
                          {"objective", s.objective},
                          {"plan", plan_json(s.plan)},
                          {"operations", ops}};
  out << j.dump(2) << '\n';
}

}  // namespace gtep
