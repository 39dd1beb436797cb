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

#include "gtep/system_model.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "gtep/calendar.hpp"
#include "json_util.hpp"

namespace gtep {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using detail::get_array;
using detail::get_int;
using detail::get_num;
using detail::get_str;
using detail::per_year;

const char* to_string(AssetStatus s) { return s == AssetStatus::kExisting ? "existing" : "candidate"; }

const char* to_string(HydroKind k) {
  switch (k) {
    case HydroKind::kRunOfRiver: return "run_of_river";
    case HydroKind::kReservoir: return "reservoir";
    case HydroKind::kPumped: return "pumped";
  }
  return "reservoir";
}

int SystemInstance::zone_index(const std::string& id) const {
  for (size_t i = 0; i < power_zones.size(); ++i)
    if (power_zones[i].id == id) return static_cast<int>(i);
  return -1;
}

int SystemInstance::gas_zone_index(const std::string& id) const {
  for (size_t i = 0; i < gas_zones.size(); ++i)
    if (gas_zones[i] == id) return static_cast<int>(i);
  return -1;
}

const RenewableZoneData* SystemInstance::renewable(const std::string& zone) const {
  for (const auto& r : renewables)
    if (r.zone == zone) return &r;
  return nullptr;
}

const GasZoneData* SystemInstance::gas_data(const std::string& zone) const {
  for (const auto& g : gas_zone_data)
    if (g.zone == zone) return &g;
  return nullptr;
}

namespace {

struct Units {
  double power = 1;     // multiplier to MW
  double cap_cost = 1;  // multiplier to money/MW
};

Units read_units(const json& meta) {
  Units u;
  if (!meta.contains("units")) return u;
  const json& j = meta.at("units");
  if (!j.is_object()) throw SchemaError("meta.units: expected an object");
  const std::string p = j.value("power", "MW");
  if (p == "kW") u.power = 1e-3;
  else if (p == "MW") u.power = 1;
  else if (p == "GW") u.power = 1e3;
  else throw SchemaError("meta.units.power: unknown unit '" + p + "'");
  const std::string c = j.value("capacity_cost", "per_MW");
  if (c == "per_kW") u.cap_cost = 1e3;
  else if (c == "per_MW") u.cap_cost = 1;
  else if (c == "per_GW") u.cap_cost = 1e-3;
  else throw SchemaError("meta.units.capacity_cost: unknown unit '" + c + "'");
  return u;
}

AssetStatus read_status(const json& o, const std::string& where) {
  const std::string s = o.contains("status") ? get_str(o, "status", where) : "existing";
  if (s == "existing") return AssetStatus::kExisting;
  if (s == "candidate") return AssetStatus::kCandidate;
  throw SchemaError(where + ": status must be 'existing' or 'candidate'");
}

std::vector<double> scaled(std::vector<double> v, double f) {
  for (auto& x : v) x *= f;
  return v;
}

Link read_link(const json& o, const std::string& kind, const Units& u,
               const std::function<bool(const std::string&)>& known) {
  Link l;
  l.id = get_str(o, "id", kind);
  const std::string where = kind + " " + l.id;
  l.from = get_str(o, "from", where);
  l.to = get_str(o, "to", where);
  for (const auto& z : {l.from, l.to})
    if (!known(z)) throw ReferenceError(where + ": unknown zone '" + z + "'");
  l.flow_min = get_num(o, "flow_min", where) * u.power;
  l.flow_max = get_num(o, "flow_max", where) * u.power;
  l.status = read_status(o, where);
  if (l.status == AssetStatus::kCandidate) l.invest_cost = get_num(o, "invest_cost", where);
  return l;
}

ojson write_link(const Link& l) {
  ojson o;
  o["id"] = l.id;
  o["from"] = l.from;
  o["to"] = l.to;
  o["flow_min"] = l.flow_min;
  o["flow_max"] = l.flow_max;
  o["status"] = to_string(l.status);
  if (l.status == AssetStatus::kCandidate) o["invest_cost"] = l.invest_cost;
  return o;
}

}  // namespace

SystemInstance load_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance: top level must be an object");

  SystemInstance inst;
  if (!doc.contains("meta")) throw SchemaError("instance: missing required field 'meta'");
  const json& meta = doc.at("meta");
  inst.base_year = get_int(meta, "base_year", "meta");
  inst.discount_rate = get_num(meta, "discount_rate", "meta");
  inst.storage_check_period = get_int(meta, "storage_check_period_days", "meta");
  if (inst.storage_check_period < 1 || inst.storage_check_period > kDaysPerYear)
    throw SchemaError("meta.storage_check_period_days must be between 1 and 365");
  for (const auto& y : get_array(meta, "years", "meta")) {
    if (!y.is_number_integer()) throw SchemaError("meta.years: expected integers");
    inst.years.push_back(y.get<int>());
  }
  if (inst.years.empty()) throw SchemaError("meta.years must not be empty");
  const Units u = read_units(meta);
  const int ny = inst.num_years();

  for (const auto& z : get_array(doc, "gas_zones", "instance")) {
    if (!z.is_string()) throw SchemaError("gas_zones: expected strings");
    inst.gas_zones.push_back(z.get<std::string>());
  }
  for (const auto& z : get_array(doc, "power_zones", "instance")) {
    PowerZone pz;
    if (z.is_string()) {
      pz.id = z.get<std::string>();
    } else {
      pz.id = get_str(z, "id", "power_zones");
      if (z.contains("gas_zone")) {
        pz.gas_zone = get_str(z, "gas_zone", "power zone " + pz.id);
        if (inst.gas_zone_index(pz.gas_zone) < 0)
          throw ReferenceError("power zone " + pz.id + ": unknown gas zone '" + pz.gas_zone + "'");
      }
    }
    inst.power_zones.push_back(pz);
  }
  auto known_power = [&](const std::string& z) { return inst.zone_index(z) >= 0; };
  auto known_gas = [&](const std::string& z) { return inst.gas_zone_index(z) >= 0; };
  auto need_power = [&](const std::string& z, const std::string& where) {
    if (!known_power(z)) throw ReferenceError(where + ": unknown power zone '" + z + "'");
  };
  auto need_gas = [&](const std::string& z, const std::string& where) {
    if (!known_gas(z)) throw ReferenceError(where + ": unknown gas zone '" + z + "'");
  };

  if (doc.contains("areas")) {
    for (const auto& a : get_array(doc, "areas", "instance")) {
      Area ar;
      ar.id = get_str(a, "id", "areas");
      for (const auto& z : get_array(a, "zones", "area " + ar.id)) {
        if (!z.is_string()) throw SchemaError("area " + ar.id + ": zones must be strings");
        need_power(z.get<std::string>(), "area " + ar.id);
        ar.zones.push_back(z.get<std::string>());
      }
      inst.areas.push_back(ar);
    }
  }
  if (doc.contains("lines"))
    for (const auto& o : get_array(doc, "lines", "instance")) inst.lines.push_back(read_link(o, "line", u, known_power));
  if (doc.contains("pipelines"))
    for (const auto& o : get_array(doc, "pipelines", "instance"))
      inst.pipelines.push_back(read_link(o, "pipeline", u, known_gas));

  if (doc.contains("thermal_clusters")) {
    for (const auto& o : get_array(doc, "thermal_clusters", "instance")) {
      ThermalCluster k;
      k.id = get_str(o, "id", "thermal_clusters");
      const std::string w = "thermal cluster " + k.id;
      k.zone = get_str(o, "zone", w);
      need_power(k.zone, w);
      k.fuel = get_str(o, "fuel", w);
      k.p_min = get_num(o, "p_min", w) * u.power;
      k.p_max = get_num(o, "p_max", w) * u.power;
      k.startup_cost = get_num(o, "startup_cost", w, 0.0);
      k.heat_rate = get_num(o, "heat_rate", w, 0.0);
      k.co2_rate = get_num(o, "co2_rate", w, 0.0);
      k.om_cost = get_num(o, "om_cost", w, 0.0);
      k.mut = get_int(o, "mut", w, 1);
      k.mdt = get_int(o, "mdt", w, 1);
      k.n0 = get_int(o, "n0", w);
      for (double v : per_year(o, "n_min", w, ny)) {
        if (v != std::floor(v)) throw SchemaError(w + ": n_min must be integers");
        k.n_min.push_back(static_cast<int>(v));
      }
      for (double v : per_year(o, "n_max", w, ny)) {
        if (v != std::floor(v)) throw SchemaError(w + ": n_max must be integers");
        k.n_max.push_back(static_cast<int>(v));
      }
      k.invest_cost = scaled(per_year(o, "invest_cost", w, ny, 0.0), u.cap_cost);
      k.decom_cost = scaled(per_year(o, "decom_cost", w, ny, 0.0), u.cap_cost);
      inst.thermal_clusters.push_back(k);
    }
  }

  if (doc.contains("hydro_plants")) {
    for (const auto& o : get_array(doc, "hydro_plants", "instance")) {
      HydroPlant h;
      h.id = get_str(o, "id", "hydro_plants");
      const std::string w = "hydro plant " + h.id;
      h.zone = get_str(o, "zone", w);
      need_power(h.zone, w);
      const std::string kind = get_str(o, "kind", w);
      if (kind == "run_of_river") h.kind = HydroKind::kRunOfRiver;
      else if (kind == "reservoir") h.kind = HydroKind::kReservoir;
      else if (kind == "pumped") h.kind = HydroKind::kPumped;
      else throw SchemaError(w + ": kind must be run_of_river, reservoir or pumped");
      h.programmable = o.contains("programmable") ? detail::get_bool(o, "programmable", w)
                                                  : h.kind != HydroKind::kRunOfRiver;
      h.out_max = get_num(o, "out_max", w) * u.power;
      h.in_max = get_num(o, "in_max", w, 0.0) * u.power;
      h.spill_max = get_num(o, "spill_max", w, 0.0) * u.power;
      h.epr = get_num(o, "epr", w, 0.0);
      h.eff_in = get_num(o, "eff_in", w, 1.0);
      h.eff_out = get_num(o, "eff_out", w, 1.0);
      h.level0 = get_num(o, "level0", w, 0.0) * u.power;
      h.cost = get_num(o, "cost", w, 0.0);
      h.status = read_status(o, w);
      if (h.status == AssetStatus::kCandidate) h.invest_cost = get_num(o, "invest_cost", w) * u.cap_cost;
      inst.hydro_plants.push_back(h);
    }
  }

  if (doc.contains("batteries")) {
    for (const auto& o : get_array(doc, "batteries", "instance")) {
      BatteryTech b;
      b.id = get_str(o, "id", "batteries");
      const std::string w = "battery " + b.id;
      b.zone = get_str(o, "zone", w);
      need_power(b.zone, w);
      b.epr = get_num(o, "epr", w);
      b.self_discharge = get_num(o, "self_discharge", w, 0.0);
      b.eff_in = get_num(o, "eff_in", w, 1.0);
      b.eff_out = get_num(o, "eff_out", w, 1.0);
      b.cost = get_num(o, "cost", w, 0.0);
      b.cap0 = get_num(o, "cap0", w, 0.0) * u.power;
      b.cap_max = get_num(o, "cap_max", w) * u.power;
      b.invest_cost = scaled(per_year(o, "invest_cost", w, ny), u.cap_cost);
      b.initial_level = get_num(o, "initial_level", w, 0.0) * u.power;
      inst.batteries.push_back(b);
    }
  }

  if (doc.contains("ptg")) {
    for (const auto& o : get_array(doc, "ptg", "instance")) {
      PtgTech g;
      g.id = get_str(o, "id", "ptg");
      const std::string w = "ptg " + g.id;
      g.power_zone = get_str(o, "power_zone", w);
      need_power(g.power_zone, w);
      g.gas_zone = get_str(o, "gas_zone", w);
      need_gas(g.gas_zone, w);
      g.efficiency = get_num(o, "efficiency", w);
      g.cost = get_num(o, "cost", w, 0.0);
      g.cap0 = get_num(o, "cap0", w, 0.0) * u.power;
      g.cap_max = get_num(o, "cap_max", w) * u.power;
      g.invest_cost = get_num(o, "invest_cost", w) * u.cap_cost;
      inst.ptg.push_back(g);
    }
  }

  if (doc.contains("renewables")) {
    for (const auto& o : get_array(doc, "renewables", "instance")) {
      RenewableZoneData r;
      r.zone = get_str(o, "zone", "renewables");
      const std::string w = "renewables " + r.zone;
      need_power(r.zone, w);
      r.solar0 = get_num(o, "solar0", w, 0.0) * u.power;
      r.wind0 = get_num(o, "wind0", w, 0.0) * u.power;
      r.solar_min = scaled(per_year(o, "solar_min", w, ny, 0.0), u.power);
      r.solar_max = scaled(per_year(o, "solar_max", w, ny, r.solar0 / u.power), u.power);
      r.wind_min = scaled(per_year(o, "wind_min", w, ny, 0.0), u.power);
      r.wind_max = scaled(per_year(o, "wind_max", w, ny, r.wind0 / u.power), u.power);
      r.solar_cost = scaled(per_year(o, "solar_cost", w, ny, 0.0), u.cap_cost);
      r.wind_cost = scaled(per_year(o, "wind_cost", w, ny, 0.0), u.cap_cost);
      inst.renewables.push_back(r);
    }
  }

  if (doc.contains("gas_zone_data")) {
    for (const auto& o : get_array(doc, "gas_zone_data", "instance")) {
      GasZoneData g;
      g.zone = get_str(o, "zone", "gas_zone_data");
      const std::string w = "gas zone data " + g.zone;
      need_gas(g.zone, w);
      g.supply_min = get_num(o, "supply_min", w, 0.0) * u.power;
      g.supply_max = get_num(o, "supply_max", w) * u.power;
      g.inj_max = get_num(o, "inj_max", w, 0.0) * u.power;
      g.wd_max = get_num(o, "wd_max", w, 0.0) * u.power;
      g.storage_max = get_num(o, "storage_max", w, 0.0) * u.power;
      g.eff_in = get_num(o, "eff_in", w, 1.0);
      g.eff_out = get_num(o, "eff_out", w, 1.0);
      g.level0 = get_num(o, "level0", w, 0.0) * u.power;
      inst.gas_zone_data.push_back(g);
    }
  }

  if (doc.contains("policy")) {
    const json& pol = doc.at("policy");
    if (!pol.is_object()) throw SchemaError("policy: expected an object");
    auto area_known = [&](const std::string& a) {
      for (const auto& ar : inst.areas)
        if (ar.id == a) return true;
      return false;
    };
    auto ensure = [&](const std::string& a) -> AreaPolicy& {
      if (!area_known(a)) throw ReferenceError("policy: unknown area '" + a + "'");
      auto& p = inst.policy[a];
      if (p.res_share.empty()) p.res_share.assign(ny, 0.0);
      if (p.co2_cap.empty()) p.co2_cap.assign(ny, kInfinity);
      return p;
    };
    if (pol.contains("res_share")) {
      if (!pol.at("res_share").is_object()) throw SchemaError("policy.res_share: expected an object");
      for (const auto& [a, v] : pol.at("res_share").items())
        ensure(a).res_share = per_year(pol.at("res_share"), a.c_str(), "policy.res_share", ny);
    }
    if (pol.contains("co2_cap")) {
      if (!pol.at("co2_cap").is_object()) throw SchemaError("policy.co2_cap: expected an object");
      for (const auto& [a, v] : pol.at("co2_cap").items()) {
        auto& p = ensure(a);
        if (!v.is_array() || static_cast<int>(v.size()) != ny)
          throw SchemaError("policy.co2_cap." + a + ": expected one entry per year");
        for (int i = 0; i < ny; ++i) {
          if (v[i].is_null()) p.co2_cap[i] = kInfinity;
          else if (v[i].is_number()) p.co2_cap[i] = v[i].get<double>();
          else throw SchemaError("policy.co2_cap." + a + ": entries must be numbers or null");
        }
      }
    }
  }

  if (doc.contains("penalties")) {
    const json& p = doc.at("penalties");
    inst.penalties.overgeneration = get_num(p, "overgeneration", "penalties", 0.0);
    inst.penalties.energy_not_supplied = get_num(p, "energy_not_supplied", "penalties", 0.0);
    inst.penalties.reserve_not_supplied = get_num(p, "reserve_not_supplied", "penalties", 0.0);
    inst.penalties.gas_curtailment = get_num(p, "gas_curtailment", "penalties", 0.0);
  }
  return inst;
}

SystemInstance load_instance_file(const std::string& path) { return load_instance(detail::read_file(path)); }

std::string save_instance(const SystemInstance& inst) {
  ojson doc;
  ojson meta;
  meta["base_year"] = inst.base_year;
  meta["discount_rate"] = inst.discount_rate;
  meta["storage_check_period_days"] = inst.storage_check_period;
  meta["years"] = inst.years;
  meta["units"] = {{"power", "MW"}, {"capacity_cost", "per_MW"}};
  doc["meta"] = meta;
  doc["power_zones"] = ojson::array();
  for (const auto& z : inst.power_zones) {
    ojson o;
    o["id"] = z.id;
    if (!z.gas_zone.empty()) o["gas_zone"] = z.gas_zone;
    doc["power_zones"].push_back(o);
  }
  doc["gas_zones"] = inst.gas_zones;
  doc["areas"] = ojson::array();
  for (const auto& a : inst.areas) doc["areas"].push_back({{"id", a.id}, {"zones", a.zones}});
  doc["lines"] = ojson::array();
  for (const auto& l : inst.lines) doc["lines"].push_back(write_link(l));
  doc["pipelines"] = ojson::array();
  for (const auto& l : inst.pipelines) doc["pipelines"].push_back(write_link(l));
  doc["thermal_clusters"] = ojson::array();
  for (const auto& k : inst.thermal_clusters) {
    ojson o;
    o["id"] = k.id;
    o["zone"] = k.zone;
    o["fuel"] = k.fuel;
    o["p_min"] = k.p_min;
    o["p_max"] = k.p_max;
    o["startup_cost"] = k.startup_cost;
    o["heat_rate"] = k.heat_rate;
    o["co2_rate"] = k.co2_rate;
    o["om_cost"] = k.om_cost;
    o["mut"] = k.mut;
    o["mdt"] = k.mdt;
    o["n0"] = k.n0;
    o["n_min"] = k.n_min;
    o["n_max"] = k.n_max;
    o["invest_cost"] = k.invest_cost;
    o["decom_cost"] = k.decom_cost;
    doc["thermal_clusters"].push_back(o);
  }
  doc["hydro_plants"] = ojson::array();
  for (const auto& h : inst.hydro_plants) {
    ojson o;
    o["id"] = h.id;
    o["zone"] = h.zone;
    o["kind"] = to_string(h.kind);
    o["programmable"] = h.programmable;
    o["out_max"] = h.out_max;
    o["in_max"] = h.in_max;
    o["spill_max"] = h.spill_max;
    o["epr"] = h.epr;
    o["eff_in"] = h.eff_in;
    o["eff_out"] = h.eff_out;
    o["level0"] = h.level0;
    o["cost"] = h.cost;
    o["status"] = to_string(h.status);
    if (h.status == AssetStatus::kCandidate) o["invest_cost"] = h.invest_cost;
    doc["hydro_plants"].push_back(o);
  }
  doc["batteries"] = ojson::array();
  for (const auto& b : inst.batteries) {
    ojson o;
    o["id"] = b.id;
    o["zone"] = b.zone;
    o["epr"] = b.epr;
    o["self_discharge"] = b.self_discharge;
    o["eff_in"] = b.eff_in;
    o["eff_out"] = b.eff_out;
    o["cost"] = b.cost;
    o["cap0"] = b.cap0;
    o["cap_max"] = b.cap_max;
    o["invest_cost"] = b.invest_cost;
    o["initial_level"] = b.initial_level;
    doc["batteries"].push_back(o);
  }
  doc["ptg"] = ojson::array();
  for (const auto& g : inst.ptg) {
    ojson o;
    o["id"] = g.id;
    o["power_zone"] = g.power_zone;
    o["gas_zone"] = g.gas_zone;
    o["efficiency"] = g.efficiency;
    o["cost"] = g.cost;
    o["cap0"] = g.cap0;
    o["cap_max"] = g.cap_max;
    o["invest_cost"] = g.invest_cost;
    doc["ptg"].push_back(o);
  }
  doc["renewables"] = ojson::array();
  for (const auto& r : inst.renewables) {
    ojson o;
    o["zone"] = r.zone;
    o["solar0"] = r.solar0;
    o["wind0"] = r.wind0;
    o["solar_min"] = r.solar_min;
    o["solar_max"] = r.solar_max;
    o["wind_min"] = r.wind_min;
    o["wind_max"] = r.wind_max;
    o["solar_cost"] = r.solar_cost;
    o["wind_cost"] = r.wind_cost;
    doc["renewables"].push_back(o);
  }
  doc["gas_zone_data"] = ojson::array();
  for (const auto& g : inst.gas_zone_data) {
    ojson o;
    o["zone"] = g.zone;
    o["supply_min"] = g.supply_min;
    o["supply_max"] = g.supply_max;
    o["inj_max"] = g.inj_max;
    o["wd_max"] = g.wd_max;
    o["storage_max"] = g.storage_max;
    o["eff_in"] = g.eff_in;
    o["eff_out"] = g.eff_out;
    o["level0"] = g.level0;
    doc["gas_zone_data"].push_back(o);
  }
  ojson pol = ojson::object();
  ojson res = ojson::object(), co2 = ojson::object();
  for (const auto& [a, p] : inst.policy) {
    res[a] = p.res_share;
    ojson caps = ojson::array();
    for (double c : p.co2_cap) caps.push_back(std::isfinite(c) ? ojson(c) : ojson(nullptr));
    co2[a] = caps;
  }
  pol["res_share"] = res;
  pol["co2_cap"] = co2;
  doc["policy"] = pol;
  doc["penalties"] = {{"overgeneration", inst.penalties.overgeneration},
                      {"energy_not_supplied", inst.penalties.energy_not_supplied},
                      {"reserve_not_supplied", inst.penalties.reserve_not_supplied},
                      {"gas_curtailment", inst.penalties.gas_curtailment}};
  return doc.dump(2) + "\n";
}

ValidationReport validate_instance(const SystemInstance& inst) {
  ValidationReport rep;
  auto bad = [&](const std::string& s) { rep.violations.push_back(s); };
  const int ny = inst.num_years();

  if (inst.years.empty()) bad("at least one model year is required");
  for (int i = 1; i < ny; ++i)
    if (inst.years[i] != inst.years[i - 1] + 1) bad("years must be consecutive integers");
  if (ny > 0 && inst.base_year > inst.years.front()) bad("base year must not exceed the first model year");
  if (!(inst.discount_rate >= 0)) bad("discount rate must be nonnegative");
  if (inst.storage_check_period < 1 || inst.storage_check_period > kDaysPerYear)
    bad("storage check period must be between 1 and 365 days");

  std::set<std::string> ids;
  auto unique = [&](const std::string& kind, const std::string& id) {
    if (!ids.insert(kind + ":" + id).second) bad(kind + " id '" + id + "' is declared more than once");
    // Ids appear inside variable labels symbol[key=value,...].
    if (id.empty() || id.find_first_of(",=[]") != std::string::npos)
      bad(kind + " id '" + id + "' must be nonempty and free of , = [ ]");
  };
  for (const auto& z : inst.power_zones) {
    unique("power zone", z.id);
    if (!z.gas_zone.empty() && inst.gas_zone_index(z.gas_zone) < 0)
      bad("power zone " + z.id + ": unknown gas zone '" + z.gas_zone + "'");
  }
  for (const auto& z : inst.gas_zones) unique("gas zone", z);

  std::map<std::string, std::string> zone_area;
  for (const auto& a : inst.areas) {
    unique("area", a.id);
    for (const auto& z : a.zones) {
      if (inst.zone_index(z) < 0) bad("area " + a.id + ": unknown power zone '" + z + "'");
      auto [it, fresh] = zone_area.emplace(z, a.id);
      if (!fresh) bad("zone " + z + " belongs to more than one area (" + it->second + ", " + a.id + ")");
    }
  }

  auto check_link = [&](const Link& l, const std::string& kind, bool gas) {
    unique(kind, l.id);
    const std::string w = kind + " " + l.id;
    for (const auto& z : {l.from, l.to})
      if ((gas ? inst.gas_zone_index(z) : inst.zone_index(z)) < 0) bad(w + ": unknown zone '" + z + "'");
    if (!(l.flow_min <= 0)) bad(w + ": flow_min must be <= 0");
    if (!(l.flow_max >= 0)) bad(w + ": flow_max must be >= 0");
    if (l.status == AssetStatus::kCandidate && !(l.invest_cost >= 0))
      bad(w + ": candidate requires a nonnegative invest_cost");
  };
  for (const auto& l : inst.lines) check_link(l, "line", false);
  for (const auto& l : inst.pipelines) check_link(l, "pipeline", true);

  for (const auto& k : inst.thermal_clusters) {
    unique("thermal cluster", k.id);
    const std::string w = "thermal cluster " + k.id;
    if (inst.zone_index(k.zone) < 0) bad(w + ": unknown zone '" + k.zone + "'");
    if (!(0 <= k.p_min && k.p_min <= k.p_max)) bad(w + ": requires 0 <= p_min <= p_max");
    if (k.mut < 1 || k.mut > kHours) bad(w + ": mut must be between 1 and 24");
    if (k.mdt < 1 || k.mdt > kHours) bad(w + ": mdt must be between 1 and 24");
    if (k.n0 < 0) bad(w + ": n0 must be nonnegative");
    if (static_cast<int>(k.n_min.size()) != ny || static_cast<int>(k.n_max.size()) != ny ||
        static_cast<int>(k.invest_cost.size()) != ny || static_cast<int>(k.decom_cost.size()) != ny) {
      bad(w + ": per-year arrays must have one entry per model year");
    } else {
      for (int i = 0; i < ny; ++i) {
        if (k.n_min[i] < 0) bad(w + ": n_min must be nonnegative");
        if (k.n_min[i] > k.n_max[i]) bad(w + ": n_min exceeds n_max in year " + std::to_string(inst.years[i]));
        if (k.invest_cost[i] < 0 || k.decom_cost[i] < 0) bad(w + ": costs must be nonnegative");
      }
    }
    if (!(k.heat_rate >= 0) || !(k.co2_rate >= 0)) bad(w + ": heat_rate and co2_rate must be nonnegative");
    if (k.fuel.empty()) bad(w + ": fuel must be named ('gas', a fuel, or 'none')");
    if (k.gas_fired()) {
      const int z = inst.zone_index(k.zone);
      if (z >= 0 && inst.power_zones[z].gas_zone.empty())
        bad(w + ": gas-fired cluster in a zone without a gas_zone");
    }
  }

  for (const auto& h : inst.hydro_plants) {
    unique("hydro plant", h.id);
    const std::string w = "hydro plant " + h.id;
    if (inst.zone_index(h.zone) < 0) bad(w + ": unknown zone '" + h.zone + "'");
    if (h.kind == HydroKind::kRunOfRiver && (h.programmable || h.in_max != 0 || h.epr != 0))
      bad(w + ": run-of-river plants are non-programmable with in_max = 0 and epr = 0");
    if (h.kind == HydroKind::kPumped && !(h.in_max > 0)) bad(w + ": pumped plants require in_max > 0");
    if (!(h.eff_in <= 1 && 1 <= h.eff_out)) bad(w + ": requires eff_in <= 1 <= eff_out");
    if (!(h.out_max >= 0 && h.in_max >= 0 && h.spill_max >= 0 && h.epr >= 0))
      bad(w + ": capacities must be nonnegative");
    if (!(0 <= h.level0 && h.level0 <= h.epr * h.out_max)) bad(w + ": requires 0 <= level0 <= epr * out_max");
    if (h.status == AssetStatus::kCandidate && !(h.invest_cost >= 0)) bad(w + ": invest_cost must be nonnegative");
  }

  for (const auto& b : inst.batteries) {
    unique("battery", b.id);
    const std::string w = "battery " + b.id;
    if (inst.zone_index(b.zone) < 0) bad(w + ": unknown zone '" + b.zone + "'");
    if (!(0 <= b.cap0 && b.cap0 <= b.cap_max)) bad(w + ": requires 0 <= cap0 <= cap_max");
    if (!(b.initial_level >= 0)) bad(w + ": initial_level must be nonnegative");
    // Level is pinned to initial_level at hour 24; with no capacity built the
    // bound epr * cap0 must already admit it.
    if (b.initial_level > b.epr * b.cap0) bad(w + ": initial_level exceeds epr * cap0");
    if (!(0 <= b.self_discharge && b.self_discharge <= 1)) bad(w + ": self_discharge must be in [0, 1]");
    if (!(b.eff_in <= 1 && b.eff_out >= 1)) bad(w + ": requires eff_in <= 1 <= eff_out");
    // Holding initial_level against self-discharge must be possible with cap0 alone.
    if (b.self_discharge * b.initial_level > b.eff_in * b.cap0 + 1e-9)
      bad(w + ": self_discharge * initial_level exceeds eff_in * cap0");
    if (!(b.epr >= 0)) bad(w + ": epr must be nonnegative");
    if (static_cast<int>(b.invest_cost.size()) != ny) bad(w + ": invest_cost needs one entry per model year");
  }

  for (const auto& g : inst.ptg) {
    unique("ptg", g.id);
    const std::string w = "ptg " + g.id;
    if (inst.zone_index(g.power_zone) < 0) bad(w + ": unknown power zone '" + g.power_zone + "'");
    if (inst.gas_zone_index(g.gas_zone) < 0) bad(w + ": unknown gas zone '" + g.gas_zone + "'");
    if (!(g.efficiency > 0 && g.efficiency <= 1)) bad(w + ": efficiency must be in (0, 1]");
    if (!(0 <= g.cap0 && g.cap0 <= g.cap_max)) bad(w + ": requires 0 <= cap0 <= cap_max");
  }

  for (const auto& r : inst.renewables) {
    unique("renewables", r.zone);
    const std::string w = "renewables " + r.zone;
    if (inst.zone_index(r.zone) < 0) bad(w + ": unknown zone");
    const bool sized = static_cast<int>(r.solar_min.size()) == ny && static_cast<int>(r.solar_max.size()) == ny &&
                       static_cast<int>(r.wind_min.size()) == ny && static_cast<int>(r.wind_max.size()) == ny &&
                       static_cast<int>(r.solar_cost.size()) == ny && static_cast<int>(r.wind_cost.size()) == ny;
    if (!sized) {
      bad(w + ": per-year arrays must have one entry per model year");
      continue;
    }
    for (int i = 0; i < ny; ++i) {
      const std::string yr = std::to_string(inst.years[i]);
      if (r.solar_min[i] > r.solar_max[i]) bad(w + ": solar_min exceeds solar_max in year " + yr);
      if (r.wind_min[i] > r.wind_max[i]) bad(w + ": wind_min exceeds wind_max in year " + yr);
      if (r.solar0 > r.solar_max[i]) bad(w + ": solar0 exceeds solar_max in year " + yr);
      if (r.wind0 > r.wind_max[i]) bad(w + ": wind0 exceeds wind_max in year " + yr);
    }
    if (r.solar0 < 0 || r.wind0 < 0) bad(w + ": initial capacities must be nonnegative");
  }

  for (const auto& g : inst.gas_zone_data) {
    unique("gas zone data", g.zone);
    const std::string w = "gas zone data " + g.zone;
    if (inst.gas_zone_index(g.zone) < 0) bad(w + ": unknown gas zone");
    if (!(g.supply_min <= g.supply_max)) bad(w + ": supply_min exceeds supply_max");
    if (!(0 <= g.level0 && g.level0 <= g.storage_max)) bad(w + ": requires 0 <= level0 <= storage_max");
    if (!(g.inj_max >= 0 && g.wd_max >= 0)) bad(w + ": storage rates must be nonnegative");
  }

  for (const auto& [a, p] : inst.policy) {
    bool known = false;
    for (const auto& ar : inst.areas) known |= ar.id == a;
    if (!known) bad("policy: unknown area '" + a + "'");
    if (static_cast<int>(p.res_share.size()) != ny || static_cast<int>(p.co2_cap.size()) != ny) {
      bad("policy " + a + ": per-year arrays must have one entry per model year");
      continue;
    }
    for (double v : p.res_share)
      if (!(0 <= v && v <= 1)) bad("policy " + a + ": res_share must be in [0, 1]");
    for (double v : p.co2_cap)
      if (!(v >= 0)) bad("policy " + a + ": co2_cap must be nonnegative");
  }

  const auto& pn = inst.penalties;
  if (!(pn.overgeneration >= 0 && pn.energy_not_supplied >= 0 && pn.reserve_not_supplied >= 0 &&
        pn.gas_curtailment >= 0))
    bad("penalties must be nonnegative");
  return rep;
}

ValidationReport validate_instance(const SystemInstance& inst, const RepresentativeCalendar& cal,
                                   const ScenarioSet& scen) {
  ValidationReport rep = validate_instance(inst);
  auto bad = [&](const std::string& s) { rep.violations.push_back(s); };
  const int ny = inst.num_years();

  for (int yi = 0; yi < ny; ++yi) {
    const int y = inst.years[yi];
    const CalendarYear* cy = nullptr;
    for (const auto& c : cal.years)
      if (c.year == y) cy = &c;
    const std::string w = "calendar year " + std::to_string(y);
    if (!cy) {
      bad(w + ": missing");
      continue;
    }
    const int nc = cy->num_clusters();
    if (nc == 0) bad(w + ": no representative days");
    int sum = 0;
    std::vector<int> count(nc, 0);
    for (const auto& c : cy->clusters) sum += c.weight;
    if (sum != kDaysPerYear) bad(w + ": cluster weights must sum to 365 (got " + std::to_string(sum) + ")");
    if (static_cast<int>(cy->day_map.size()) != kDaysPerYear) {
      bad(w + ": day_map must list 365 days");
    } else {
      bool range_ok = true;
      for (int c : cy->day_map) {
        if (c < 0 || c >= nc) range_ok = false;
        else ++count[c];
      }
      if (!range_ok) bad(w + ": day_map references an unknown cluster");
      for (int c = 0; c < nc; ++c)
        if (count[c] != cy->clusters[c].weight)
          bad(w + ": weight of cluster " + cy->clusters[c].id + " does not match its day count");
    }
    auto profile = [&](const Profile& p, const std::string& what, const std::string& key, double lo, double hi) {
      auto it = p.find(key);
      if (it == p.end()) {
        bad(w + ": " + what + " profile missing for " + key);
        return;
      }
      if (static_cast<int>(it->second.size()) != nc) {
        bad(w + ": " + what + " profile for " + key + " must cover every cluster");
        return;
      }
      for (const auto& day : it->second) {
        if (static_cast<int>(day.size()) != kHours) {
          bad(w + ": " + what + " profile for " + key + " must cover 24 hours");
          return;
        }
        for (double v : day)
          if (!(v >= lo && v <= hi)) {
            bad(w + ": " + what + " profile for " + key + " out of range");
            return;
          }
      }
    };
    const double inf = kInfinity;
    for (const auto& z : inst.power_zones) {
      profile(cy->solar, "solar", z.id, 0, 1);
      profile(cy->wind, "wind", z.id, 0, 1);
      profile(cy->demand_power, "demand_power", z.id, 0, inf);
      profile(cy->reserve, "reserve", z.id, 0, inf);
    }
    for (const auto& n : inst.gas_zones) profile(cy->demand_gas, "demand_gas", n, 0, inf);
    for (const auto& h : inst.hydro_plants) {
      profile(cy->inflow, "inflow", h.id, 0, inf);
      // Complete recourse: a reservoir must be able to pass each day's inflow on.
      auto it = cy->inflow.find(h.id);
      if (!h.programmable || it == cy->inflow.end() || static_cast<int>(it->second.size()) != nc) continue;
      for (int c = 0; c < nc; ++c) {
        double day = 0;
        for (double v : it->second[c]) day += v;
        if (day > kHours * (h.out_max * h.eff_out + h.spill_max) * (1 + 1e-12))
          bad(w + ": inflow of hydro plant " + h.id + " on cluster " + cy->clusters[c].id +
              " exceeds 24 * (eff_out * out_max + spill_max)");
      }
    }
  }

  if (scen.scenarios.empty()) bad("at least one scenario is required");
  double total = 0;
  std::set<std::string> fuels;
  for (const auto& k : inst.thermal_clusters)
    if (!k.gas_fired() && k.fuel != "none") fuels.insert(k.fuel);
  std::set<std::string> sids;
  for (const auto& s : scen.scenarios) {
    const std::string w = "scenario " + s.id;
    if (!sids.insert(s.id).second) bad(w + ": duplicate id");
    total += s.probability;
    if (!(s.probability >= 0)) bad(w + ": probability must be nonnegative");
    auto path = [&](const std::vector<double>& v, const std::string& what) {
      if (static_cast<int>(v.size()) != ny) {
        bad(w + ": " + what + " needs one price per model year");
        return;
      }
      for (double p : v)
        if (!(p >= 0)) bad(w + ": " + what + " prices must be nonnegative");
    };
    path(s.co2, "co2");
    for (const auto& f : fuels) {
      auto it = s.fuel.find(f);
      if (it == s.fuel.end()) bad(w + ": missing price path for fuel " + f);
      else path(it->second, "fuel " + f);
    }
    for (const auto& n : inst.gas_zones) {
      auto it = s.gas_cost.find(n);
      if (it == s.gas_cost.end()) bad(w + ": missing gas cost for zone " + n);
      else path(it->second, "gas cost " + n);
    }
  }
  if (!scen.scenarios.empty() && std::abs(total - 1) > 1e-9) bad("scenario probabilities must sum to 1");
  return rep;
}

}  // namespace gtep
