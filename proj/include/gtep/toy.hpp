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

#ifndef GTEP_TOY_HPP
#define GTEP_TOY_HPP

#include <cstdint>

#include "gtep/calendar.hpp"
#include "gtep/system_model.hpp"

namespace gtep {

struct ToyData {
  SystemInstance instance;
  RepresentativeCalendar calendar;
  ScenarioSet scenarios;
};

struct ToyOptions {
  // Zero picks uniformly from the documented range.
  int power_zones = 0;  // 2..3
  int gas_zones = 0;    // 1..2
  int years = 0;        // 2..3
  int scenarios = 0;    // 2..4
  int storage_check_period = 30;
  bool candidates = true;            // false: no candidate assets, no expansion
  bool identical_scenarios = false;  // every scenario carries the same prices
};

// Deterministic in (seed, options): 2 representative days, <= 3 candidate
// assets per class, UC data chosen so the relaxation is close to tight.
ToyData generate_toy(std::uint64_t seed, const ToyOptions& o = {});

}  // namespace gtep

#endif  // GTEP_TOY_HPP
