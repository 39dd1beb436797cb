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

#ifndef GTEP_CALENDAR_HPP
#define GTEP_CALENDAR_HPP

#include <map>
#include <string>
#include <vector>

namespace gtep {

inline constexpr int kDaysPerYear = 365;
inline constexpr int kHours = 24;

struct DayCluster {
  std::string id;
  int weight = 0;  // number of calendar days represented
  bool operator==(const DayCluster&) const = default;
};

// Hourly profile per key (zone or plant id): [cluster][hour].
using Profile = std::map<std::string, std::vector<std::vector<double>>>;

struct CalendarYear {
  int year = 0;
  std::vector<DayCluster> clusters;
  std::vector<int> day_map;  // day d (0-based) -> cluster index
  Profile solar, wind;       // per unit of installed capacity
  Profile inflow;            // MW, by hydro plant
  Profile demand_power;      // MW, by power zone
  Profile demand_gas;        // MW_th, by gas zone
  Profile reserve;           // MW, by power zone

  int num_clusters() const { return static_cast<int>(clusters.size()); }
  // Value at (key, cluster, hour); 0 when the key is absent.
  static double at(const Profile& p, const std::string& key, int c, int t);
  bool operator==(const CalendarYear&) const = default;
};

struct RepresentativeCalendar {
  std::vector<CalendarYear> years;
  // Throws std::out_of_range if the year is missing.
  const CalendarYear& year(int y) const;
  bool operator==(const RepresentativeCalendar&) const = default;
};

struct Scenario {
  std::string id;
  double probability = 0;
  std::vector<double> co2;                            // per model year, money/ton
  std::map<std::string, std::vector<double>> fuel;    // fuel -> per year, money/Gcal
  std::map<std::string, std::vector<double>> gas_cost;  // gas zone -> per year, money/MWh_th
  bool operator==(const Scenario&) const = default;
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  int size() const { return static_cast<int>(scenarios.size()); }
  bool operator==(const ScenarioSet&) const = default;
};

// Parse errors are reported as gtep::ParseError / SchemaError.
RepresentativeCalendar load_calendar(const std::string& text);
RepresentativeCalendar load_calendar_file(const std::string& path);
std::string save_calendar(const RepresentativeCalendar& cal);
ScenarioSet load_scenarios(const std::string& text);
ScenarioSet load_scenarios_file(const std::string& path);
std::string save_scenarios(const ScenarioSet& s);

// Storage checkpoint chain: the year is cut into floor(365/M) segments of M
// days, each ending in a checkpoint, plus a tail d = floor(365/M)*M+1 .. 365
// (possibly empty) that closes the annual cycle.
struct CheckpointSegment {
  int checkpoint = 0;  // 1..num_checkpoints; 0 for the tail
  int first_day = 0;   // 1-based, inclusive
  int last_day = 0;    // inclusive; last_day < first_day for an empty tail
  std::vector<int> cluster_days;  // days of each cluster in the segment
  int num_days() const { return last_day >= first_day ? last_day - first_day + 1 : 0; }
};

struct CheckpointChain {
  int period = 0;
  int num_checkpoints = 0;
  std::vector<CheckpointSegment> segments;  // interior segments, then the tail
  const CheckpointSegment& tail() const { return segments.back(); }
};

CheckpointChain expand_checkpoints(const CalendarYear& cal, int period_days);

// Single scenario with probability 1 and every price replaced by its expectation.
ScenarioSet mean_value_scenario(const ScenarioSet& scen);

}  // namespace gtep

#endif  // GTEP_CALENDAR_HPP
