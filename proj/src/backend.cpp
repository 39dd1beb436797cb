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

#include "gtep/backend.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

#include "gtep/milp.hpp"
#include "gtep/simplex.hpp"

namespace gtep {
namespace {

class Builtin final : public SolverBackend {
 public:
  std::string name() const override { return "builtin"; }
  LpSolution solve_lp(const LpProblem& p, const SolverOptions& opts, const Basis* warm) const override {
    return gtep::solve_lp(p, opts, warm);
  }
  MilpSolution solve_milp(const LpProblem& p, const SolverOptions& opts,
                          const Eigen::VectorXd* hint) const override {
    return gtep::solve_milp(p, opts, hint);
  }
};

struct Registry {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const SolverBackend>> items;
  Registry() { items["builtin"] = std::make_shared<Builtin>(); }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_backend(std::shared_ptr<const SolverBackend> b) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.items[b->name()] = std::move(b);
}

std::vector<std::string> backend_names() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> out;
  for (const auto& [k, v] : r.items) out.push_back(k);
  return out;
}

std::shared_ptr<const SolverBackend> backend_by_name(const std::string& name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.items.find(name);
  if (it == r.items.end()) throw std::invalid_argument("unknown solver backend '" + name + "'");
  return it->second;
}

std::shared_ptr<const SolverBackend> default_backend() {
  const char* env = std::getenv("GTEP_SOLVER_BACKEND");
  return backend_by_name(env && *env ? env : "builtin");
}

}  // namespace gtep
