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

// gtep: validate inputs, solve, evaluate the value of the stochastic solution.
// Exit codes: 0 ok/converged, 1 validation violations, 2 parse error or bad
// usage, 3 iteration limit, 4 solver failure.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtep/analysis.hpp"
#include "gtep/mps.hpp"
#include "gtep/toy.hpp"

namespace fs = std::filesystem;
using namespace gtep;

namespace {

enum Exit : int { kOk = 0, kViolations = 1, kParse = 2, kIterationLimit = 3, kSolverFailure = 4 };

struct RunConfig {
  std::string method = "benders";
  double eps = 1e-3;
  int max_iter = 100;
  int parallelism = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool relax_uc = false;
  bool discount_operations = false;
  std::uint64_t seed = 1;
  std::string out = "out";

  void check() const {
    if (!(eps >= 0)) throw std::invalid_argument("--eps must be nonnegative");
    if (max_iter < 1) throw std::invalid_argument("--max-iter must be at least 1");
    if (parallelism < 1) throw std::invalid_argument("--parallelism must be at least 1");
  }
  BendersConfig benders() const {
    BendersConfig c;
    c.eps = eps;
    c.max_iter = max_iter;
    c.parallelism = parallelism;
    c.build.relax_uc = relax_uc;
    c.build.discount_operations = discount_operations;
    c.backend = default_backend();
    return c;
  }
};

struct Inputs {
  std::string instance, calendar, scenarios;
};

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("instance", in.instance, "instance JSON")->required();
  cmd->add_option("calendar", in.calendar, "representative-day calendar JSON")->required();
  cmd->add_option("scenarios", in.scenarios, "scenario JSON")->required();
}

void add_run_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--method", rc.method, "benders | monolithic")->capture_default_str();
  cmd->add_option("--eps", rc.eps, "relative gap tolerance")->capture_default_str();
  cmd->add_option("--max-iter", rc.max_iter, "Benders iteration limit")->capture_default_str();
  cmd->add_option("--parallelism", rc.parallelism, "worker threads")->capture_default_str();
  cmd->add_flag("--relax-uc", rc.relax_uc, "continuous unit commitment (no integer final pass)");
  cmd->add_flag("--discount-operations", rc.discount_operations, "discount second-stage costs");
  cmd->add_option("--seed", rc.seed, "seed (test-instance generation)");
  cmd->add_option("--out", rc.out, "output directory")->capture_default_str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

template <typename Fn>
void write_file(const fs::path& p, Fn fn) {
  auto f = open_out(p);
  fn(f);
}

// Loads and validates; violations go to stderr.
struct Loaded {
  SystemInstance inst;
  RepresentativeCalendar cal;
  ScenarioSet scen;
};
Loaded load(const Inputs& in) {
  return {load_instance_file(in.instance), load_calendar_file(in.calendar), load_scenarios_file(in.scenarios)};
}

int report_violations(const ValidationReport& r) {
  for (const auto& v : r.violations) std::cerr << "violation: " << v << '\n';
  return r.ok() ? kOk : kViolations;
}

// Runs `body` with the shared error-to-exit-code mapping.
template <typename Fn>
int guarded(Fn body) {
  try {
    return body();
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure";
    if (!e.scenario.empty()) std::cerr << " (year " << e.year << ", scenario " << e.scenario << ")";
    std::cerr << ": " << e.what() << '\n';
    return kSolverFailure;
  } catch (const InstanceError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
}

// Validation before any solve; returns the exit code or -1 to continue.
int prevalidate(const Loaded& l) {
  const auto r = validate_instance(l.inst, l.cal, l.scen);
  return r.ok() ? -1 : report_violations(r);
}

void write_summary(const SolveOutcome& s, const RunConfig& rc, const std::string& digest, const fs::path& p) {
  nlohmann::ordered_json j = {{"method", to_string(s.method)},
                              {"uc", to_string(s.uc)},
                              {"objective", s.objective},
                              {"relaxed_objective", s.relaxed_objective},
                              {"gap", s.gap},
                              {"iterations", s.iterations},
                              {"converged", s.converged},
                              {"wall_time_s", s.wall_ms / 1000},
                              {"eps", rc.eps},
                              {"max_iter", rc.max_iter},
                              {"parallelism", rc.parallelism},
                              {"backend", default_backend()->name()},
                              {"digest", digest}};
  if (s.benders && s.benders->final_pass) j["final_gap"] = s.benders->final_gap;
  if (std::isnan(s.relaxed_objective)) j["relaxed_objective"] = nullptr;
  write_file(p, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

int cmd_validate(const Inputs& in) {
  return guarded([&]() -> int {
    const auto l = load(in);
    const int code = report_violations(validate_instance(l.inst, l.cal, l.scen));
    if (code == kOk) std::cerr << "ok: " << l.inst.years.size() << " years, " << l.scen.size() << " scenarios\n";
    return code;
  });
}

int cmd_solve(const Inputs& in, const RunConfig& rc) {
  return guarded([&]() -> int {
    rc.check();
    const Method method = parse_method(rc.method);
    const auto l = load(in);
    if (int c = prevalidate(l); c >= 0) return c;
    const ModelData d(l.inst, l.cal, l.scen);
    const fs::path out = rc.out;
    fs::create_directories(out);
    const BendersConfig cfg = rc.benders();
    const SolveOutcome s = solve_gtep(d, method, cfg);
    const auto eval = summarize_operations(d, s.plan, s.uc, s.operations, cfg.build);

    write_file(out / "plan.csv", [&](std::ostream& o) { write_plan_csv(s.plan, o); });
    write_file(out / "costs.csv", [&](std::ostream& o) { write_costs_csv(eval, o); });
    write_file(out / "evaluation.json", [&](std::ostream& o) { write_evaluation_json(eval, o); });
    write_file(out / "solution.json", [&](std::ostream& o) { write_solution_json(d, s, o); });
    if (s.benders) write_file(out / "convergence.csv", [&](std::ostream& o) { write_convergence_csv(s.benders->state, o); });
    write_summary(s, rc, eval.digest, out / "summary.json");

    std::cerr << to_string(method) << ": objective " << std::setprecision(10) << s.objective << ", gap " << s.gap
              << ", " << s.iterations << (method == Method::kBenders ? " iterations" : " nodes") << ", "
              << s.wall_ms / 1000 << " s\n";
    if (!s.converged) {
      std::cerr << "not converged within the limit\n";
      return kIterationLimit;
    }
    return kOk;
  });
}

int cmd_vss(const Inputs& in, const RunConfig& rc) {
  return guarded([&]() -> int {
    rc.check();
    const Method method = parse_method(rc.method);
    const auto l = load(in);
    if (int c = prevalidate(l); c >= 0) return c;
    const ModelData d(l.inst, l.cal, l.scen);
    const fs::path out = rc.out;
    fs::create_directories(out);
    const auto uc = rc.relax_uc ? UcMode::kRelaxed : UcMode::kInteger;
    const VssRun r = run_vss(d, method, uc, rc.benders());
    write_file(out / "vss.json", [&](std::ostream& o) { write_vss_json(r.report, o); });
    write_file(out / "evaluation_stochastic.json", [&](std::ostream& o) { write_evaluation_json(r.stoch_eval, o); });
    write_file(out / "evaluation_mvp.json", [&](std::ostream& o) { write_evaluation_json(r.mvp_eval, o); });
    write_file(out / "plan.csv", [&](std::ostream& o) { write_plan_csv(r.stochastic.plan, o); });
    write_file(out / "plan_mvp.csv", [&](std::ostream& o) { write_plan_csv(r.mean_value.plan, o); });
    write_file(out / "costs.csv", [&](std::ostream& o) { write_costs_csv(r.stoch_eval, o); });
    write_file(out / "costs_mvp.csv", [&](std::ostream& o) { write_costs_csv(r.mvp_eval, o); });
    std::cerr << "VSS " << std::setprecision(10) << r.report.vss << " (" << 100 * r.report.vss_pct << " % of "
              << r.report.mvp_expected_total << ", " << to_string(uc) << " UC)\n";
    return r.stochastic.converged && r.mean_value.converged ? kOk : kIterationLimit;
  });
}

int cmd_generate(const RunConfig& rc, const ToyOptions& o) {
  return guarded([&]() -> int {
    const auto t = generate_toy(rc.seed, o);
    const fs::path out = rc.out;
    fs::create_directories(out);
    write_file(out / "instance.json", [&](std::ostream& f) { f << save_instance(t.instance); });
    write_file(out / "calendar.json", [&](std::ostream& f) { f << save_calendar(t.calendar); });
    write_file(out / "scenarios.json", [&](std::ostream& f) { f << save_scenarios(t.scenarios); });
    std::cerr << "wrote toy seed " << rc.seed << " to " << out.string() << '\n';
    return kOk;
  });
}

int cmd_export_mps(const Inputs& in, const RunConfig& rc, const std::string& problem) {
  return guarded([&]() -> int {
    const auto l = load(in);
    if (int c = prevalidate(l); c >= 0) return c;
    const ModelData d(l.inst, l.cal, l.scen);
    BuildOptions o;
    o.relax_uc = rc.relax_uc;
    o.discount_operations = rc.discount_operations;
    LpProblem lp;
    if (problem == "monolithic") lp = build_monolithic(d, o).lp;
    else if (problem == "master") lp = build_master(d, {}, 1, o).lp;
    else throw std::invalid_argument("unknown problem '" + problem + "' (expected monolithic or master)");
    const fs::path out = rc.out;
    fs::create_directories(out);
    write_file(out / (problem + ".mps"), [&](std::ostream& f) { write_mps(lp, f, problem); });
    std::cerr << lp.num_cols() << " columns, " << lp.num_rows() << " rows\n";
    return kOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint electricity and gas expansion planning under price uncertainty"};
  app.require_subcommand(1);
  Inputs in;
  RunConfig rc;

  auto* validate = app.add_subcommand("validate", "check an instance/calendar/scenario triple");
  add_inputs(validate, in);

  auto* solve = app.add_subcommand("solve", "solve the stochastic expansion problem");
  add_inputs(solve, in);
  add_run_flags(solve, rc);

  auto* vss = app.add_subcommand("vss", "value of the stochastic solution");
  add_inputs(vss, in);
  add_run_flags(vss, rc);

  ToyOptions toy;
  bool no_candidates = false;
  auto* generate = app.add_subcommand("generate", "write a seeded toy instance");
  generate->add_option("--seed", rc.seed, "toy seed")->capture_default_str();
  generate->add_option("--out", rc.out, "output directory")->capture_default_str();
  generate->add_option("--power-zones", toy.power_zones, "2..3, 0 = from seed");
  generate->add_option("--gas-zones", toy.gas_zones, "1..2, 0 = from seed");
  generate->add_option("--years", toy.years, "2..3, 0 = from seed");
  generate->add_option("--scenarios", toy.scenarios, "2..4, 0 = from seed");
  generate->add_flag("--identical-scenarios", toy.identical_scenarios, "every scenario carries the same prices");
  generate->add_flag("--no-candidates", no_candidates, "no candidate assets");

  std::string problem = "monolithic";
  auto* mps = app.add_subcommand("export-mps", "write the monolithic or first master problem as MPS");
  add_inputs(mps, in);
  mps->add_option("--problem", problem, "monolithic | master")->capture_default_str();
  mps->add_flag("--relax-uc", rc.relax_uc, "continuous unit commitment");
  mps->add_flag("--discount-operations", rc.discount_operations, "discount second-stage costs");
  mps->add_option("--out", rc.out, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return e.get_exit_code() == 0 ? kOk : kParse;
  }
  if (*validate) return cmd_validate(in);
  if (*solve) return cmd_solve(in, rc);
  if (*vss) return cmd_vss(in, rc);
  if (*generate) {
    toy.candidates = !no_candidates;
    return cmd_generate(rc, toy);
  }
  return cmd_export_mps(in, rc, problem);
}
