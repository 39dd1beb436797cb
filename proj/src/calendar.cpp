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

#include "gtep/calendar.hpp"

#include <algorithm>
#include <stdexcept>

#include "gtep/system_model.hpp"
#include "json_util.hpp"

namespace gtep {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

double CalendarYear::at(const Profile& p, const std::string& key, int c, int t) {
  auto it = p.find(key);
  if (it == p.end()) return 0;
  return it->second.at(c).at(t);
}

const CalendarYear& RepresentativeCalendar::year(int y) const {
  for (const auto& c : years)
    if (c.year == y) return c;
  throw std::out_of_range("calendar has no year " + std::to_string(y));
}

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Profile read_profile(const json& profiles, const char* key, const std::string& where) {
  Profile out;
  if (!profiles.contains(key)) return out;
  const json& p = profiles.at(key);
  if (!p.is_object()) throw SchemaError(where + "." + key + ": expected an object");
  for (const auto& [k, days] : p.items()) {
    if (!days.is_array()) throw SchemaError(where + "." + key + "." + k + ": expected [cluster][hour]");
    auto& v = out[k];
    for (const auto& d : days) v.push_back(detail::num_array(d, where + "." + key + "." + k));
  }
  return out;
}

ojson write_profile(const Profile& p) {
  ojson o = ojson::object();
  for (const auto& [k, v] : p) o[k] = v;
  return o;
}

std::map<std::string, std::vector<double>> read_paths(const json& s, const char* key, const std::string& where) {
  std::map<std::string, std::vector<double>> out;
  if (!s.contains(key)) return out;
  const json& j = s.at(key);
  if (!j.is_object()) throw SchemaError(where + "." + key + ": expected an object");
  for (const auto& [k, v] : j.items()) out[k] = detail::num_array(v, where + "." + key + "." + k);
  return out;
}

}  // namespace

RepresentativeCalendar load_calendar(const std::string& text) {
  const json doc = parse(text, "calendar");
  RepresentativeCalendar cal;
  for (const auto& y : detail::get_array(doc, "years", "calendar")) {
    CalendarYear cy;
    cy.year = detail::get_int(y, "year", "calendar year");
    const std::string w = "calendar year " + std::to_string(cy.year);
    for (const auto& c : detail::get_array(y, "clusters", w))
      cy.clusters.push_back({detail::get_str(c, "id", w + " cluster"), detail::get_int(c, "weight", w + " cluster")});
    for (const auto& d : detail::get_array(y, "day_map", w)) {
      if (d.is_string()) {
        const auto id = d.get<std::string>();
        auto it = std::find_if(cy.clusters.begin(), cy.clusters.end(), [&](const DayCluster& c) { return c.id == id; });
        if (it == cy.clusters.end()) throw ReferenceError(w + ": day_map references unknown cluster '" + id + "'");
        cy.day_map.push_back(static_cast<int>(it - cy.clusters.begin()));
      } else if (d.is_number_integer()) {
        cy.day_map.push_back(d.get<int>());
      } else {
        throw SchemaError(w + ": day_map entries must be cluster ids");
      }
    }
    if (y.contains("profiles")) {
      const json& p = y.at("profiles");
      if (!p.is_object()) throw SchemaError(w + ".profiles: expected an object");
      cy.solar = read_profile(p, "solar", w);
      cy.wind = read_profile(p, "wind", w);
      cy.inflow = read_profile(p, "inflow", w);
      cy.demand_power = read_profile(p, "demand_power", w);
      cy.demand_gas = read_profile(p, "demand_gas", w);
      cy.reserve = read_profile(p, "reserve", w);
    }
    cal.years.push_back(std::move(cy));
  }
  return cal;
}

RepresentativeCalendar load_calendar_file(const std::string& path) { return load_calendar(detail::read_file(path)); }

std::string save_calendar(const RepresentativeCalendar& cal) {
  ojson doc;
  doc["years"] = ojson::array();
  for (const auto& cy : cal.years) {
    ojson y;
    y["year"] = cy.year;
    y["clusters"] = ojson::array();
    for (const auto& c : cy.clusters) y["clusters"].push_back({{"id", c.id}, {"weight", c.weight}});
    y["day_map"] = ojson::array();
    for (int c : cy.day_map) {
      if (c >= 0 && c < cy.num_clusters()) y["day_map"].push_back(cy.clusters[c].id);
      else y["day_map"].push_back(c);
    }
    y["profiles"] = {{"solar", write_profile(cy.solar)},
                     {"wind", write_profile(cy.wind)},
                     {"inflow", write_profile(cy.inflow)},
                     {"demand_power", write_profile(cy.demand_power)},
                     {"demand_gas", write_profile(cy.demand_gas)},
                     {"reserve", write_profile(cy.reserve)}};
    doc["years"].push_back(y);
  }
  return doc.dump(2) + "\n";
}

ScenarioSet load_scenarios(const std::string& text) {
  const json doc = parse(text, "scenarios");
  ScenarioSet set;
  for (const auto& s : detail::get_array(doc, "scenarios", "scenarios")) {
    Scenario sc;
    sc.id = detail::get_str(s, "id", "scenario");
    const std::string w = "scenario " + sc.id;
    sc.probability = detail::get_num(s, "probability", w);
    sc.co2 = detail::num_array(detail::field(s, "co2", w), w + ".co2");
    sc.fuel = read_paths(s, "fuel", w);
    sc.gas_cost = read_paths(s, "gas_cost", w);
    set.scenarios.push_back(std::move(sc));
  }
  return set;
}

ScenarioSet load_scenarios_file(const std::string& path) { return load_scenarios(detail::read_file(path)); }

std::string save_scenarios(const ScenarioSet& set) {
  ojson doc;
  doc["scenarios"] = ojson::array();
  for (const auto& s : set.scenarios) {
    ojson o;
    o["id"] = s.id;
    o["probability"] = s.probability;
    o["co2"] = s.co2;
    o["fuel"] = ojson::object();
    for (const auto& [f, v] : s.fuel) o["fuel"][f] = v;
    o["gas_cost"] = ojson::object();
    for (const auto& [n, v] : s.gas_cost) o["gas_cost"][n] = v;
    doc["scenarios"].push_back(o);
  }
  return doc.dump(2) + "\n";
}

CheckpointChain expand_checkpoints(const CalendarYear& cal, int period_days) {
  if (period_days < 1 || period_days > kDaysPerYear) throw std::invalid_argument("checkpoint period must be in 1..365");
  CheckpointChain chain;
  chain.period = period_days;
  chain.num_checkpoints = kDaysPerYear / period_days;
  auto segment = [&](int id, int first, int last) {
    CheckpointSegment s;
    s.checkpoint = id;
    s.first_day = first;
    s.last_day = last;
    s.cluster_days.assign(cal.num_clusters(), 0);
    for (int d = first; d <= last; ++d) {
      const int c = d - 1 < static_cast<int>(cal.day_map.size()) ? cal.day_map[d - 1] : -1;
      if (c >= 0 && c < cal.num_clusters()) ++s.cluster_days[c];
    }
    return s;
  };
  for (int xi = 1; xi <= chain.num_checkpoints; ++xi)
    chain.segments.push_back(segment(xi, (xi - 1) * period_days + 1, xi * period_days));
  chain.segments.push_back(segment(0, chain.num_checkpoints * period_days + 1, kDaysPerYear));
  return chain;
}

ScenarioSet mean_value_scenario(const ScenarioSet& scen) {
  if (scen.scenarios.empty()) throw std::invalid_argument("mean_value_scenario needs at least one scenario");
  if (scen.size() == 1) {
    ScenarioSet out = scen;
    out.scenarios[0].probability = 1;
    return out;
  }
  Scenario m;
  m.id = "MEAN";
  m.probability = 1;
  auto acc = [](std::vector<double>& dst, const std::vector<double>& src, double pb) {
    if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
    for (size_t i = 0; i < src.size(); ++i) dst[i] += pb * src[i];
  };
  for (const auto& s : scen.scenarios) {
    acc(m.co2, s.co2, s.probability);
    for (const auto& [f, v] : s.fuel) acc(m.fuel[f], v, s.probability);
    for (const auto& [n, v] : s.gas_cost) acc(m.gas_cost[n], v, s.probability);
  }
  ScenarioSet out;
  out.scenarios.push_back(std::move(m));
  return out;
}

}  // namespace gtep
