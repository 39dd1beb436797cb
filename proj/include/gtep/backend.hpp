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

#ifndef GTEP_BACKEND_HPP
#define GTEP_BACKEND_HPP

#include <memory>
#include <string>
#include <vector>

#include "gtep/lp.hpp"

namespace gtep {

// Anything that can stand in for the built-in solver. Row duals of an
// optimal LP (in particular of the fixing rows) are mandatory.
class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual std::string name() const = 0;
  virtual LpSolution solve_lp(const LpProblem& p, const SolverOptions& opts, const Basis* warm) const = 0;
  virtual MilpSolution solve_milp(const LpProblem& p, const SolverOptions& opts,
                                  const Eigen::VectorXd* hint) const = 0;
};

// Registry. "builtin" is always present. Registering a duplicate name
// replaces the earlier entry.
void register_backend(std::shared_ptr<const SolverBackend> b);
std::vector<std::string> backend_names();
// Throws std::invalid_argument for unknown names.
std::shared_ptr<const SolverBackend> backend_by_name(const std::string& name);
// Honors GTEP_SOLVER_BACKEND, defaulting to "builtin".
std::shared_ptr<const SolverBackend> default_backend();

}  // namespace gtep

#endif  // GTEP_BACKEND_HPP
