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

#include "gtep/toy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace gtep {
namespace {

// Portable draws: std distributions are implementation-defined, so toys are
// built from raw 64-bit output only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  int integer(int lo, int hi) { return lo + static_cast<int>(g_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[g_() % i]);
  }

 private:
  std::mt19937_64 g_;
};

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

ToyData generate_toy(std::uint64_t seed, const ToyOptions& o) {
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  const int Z = o.power_zones ? o.power_zones : rng.integer(2, 3);
  const int N = o.gas_zones ? o.gas_zones : rng.integer(1, 2);
  const int Y = o.years ? o.years : rng.integer(2, 3);
  const int W = o.scenarios ? o.scenarios : rng.integer(2, 4);
  const bool cand = o.candidates;

  ToyData out;
  auto& in = out.instance;
  in.base_year = 2030;
  in.discount_rate = 0.05;
  in.storage_check_period = o.storage_check_period;
  for (int y = 0; y < Y; ++y) in.years.push_back(2030 + y);
  auto per_year = [&](double v, double growth = 0) {
    std::vector<double> r;
    for (int y = 0; y < Y; ++y) r.push_back(round_to(v * std::pow(1 + growth, y), 0.01));
    return r;
  };

  for (int n = 0; n < N; ++n) in.gas_zones.push_back("G" + std::to_string(n + 1));
  for (int z = 0; z < Z; ++z) in.power_zones.push_back({"Z" + std::to_string(z + 1), in.gas_zones[z % N]});
  Area area{"A1", {}};
  for (const auto& z : in.power_zones) area.zones.push_back(z.id);
  in.areas.push_back(area);

  auto zid = [&](int z) { return in.power_zones[z].id; };
  for (int z = 0; z + 1 < Z; ++z)
    in.lines.push_back({"L" + std::to_string(z + 1), zid(z), zid(z + 1), -round_to(rng.uniform(200, 400), 10),
                        round_to(rng.uniform(200, 400), 10), AssetStatus::kExisting, 0});
  if (cand) {
    in.lines.push_back({"LC1", zid(0), zid(1), -300, 300, AssetStatus::kCandidate, round_to(rng.uniform(2e6, 6e6), 1e4)});
    if (Z == 3)
      in.lines.push_back({"LC2", zid(0), zid(2), -250, 250, AssetStatus::kCandidate, round_to(rng.uniform(3e6, 8e6), 1e4)});
  }
  if (N == 2) {
    in.pipelines.push_back({"J1", "G1", "G2", -300, 300, AssetStatus::kExisting, 0});
    if (cand) in.pipelines.push_back({"JC1", "G2", "G1", -400, 400, AssetStatus::kCandidate, round_to(rng.uniform(1e6, 4e6), 1e4)});
  }

  for (int z = 0; z < Z; ++z) {
    ThermalCluster k;
    k.id = "CCGT" + std::to_string(z + 1);
    k.zone = zid(z);
    k.fuel = "gas";
    k.p_max = round_to(rng.uniform(300, 420), 10);
    k.p_min = round_to(0.15 * k.p_max, 1);
    k.startup_cost = round_to(rng.uniform(1000, 3000), 100);
    k.heat_rate = round_to(rng.uniform(1.7, 2.1), 0.01);
    k.co2_rate = 0.37;
    k.om_cost = round_to(rng.uniform(2, 4), 0.1);
    k.mut = rng.integer(1, 3);
    k.mdt = rng.integer(1, 3);
    k.n0 = 2;
    k.n_min.assign(Y, 0);
    k.n_max.assign(Y, cand ? 4 : 2);
    if (!cand) k.n_min.assign(Y, 2);
    k.invest_cost = per_year(round_to(rng.uniform(40000, 70000), 100), -0.01);
    k.decom_cost = per_year(2000);
    in.thermal_clusters.push_back(k);
  }
  {
    ThermalCluster k;
    k.id = "COAL1";
    k.zone = zid(0);
    k.fuel = "coal";
    k.p_max = 300;
    k.p_min = 60;
    k.startup_cost = 4000;
    k.heat_rate = 2.2;
    k.co2_rate = 0.9;
    k.om_cost = 2;
    k.mut = 4;
    k.mdt = 3;
    k.n0 = 2;
    k.n_min.assign(Y, cand ? 0 : 2);
    k.n_max.assign(Y, 2);
    k.invest_cost = per_year(0);
    k.decom_cost = per_year(1000);
    in.thermal_clusters.push_back(k);
  }

  HydroPlant res;
  res.id = "HR1";
  res.zone = zid(0);
  res.kind = HydroKind::kReservoir;
  res.out_max = round_to(rng.uniform(100, 200), 10);
  res.spill_max = 100;
  res.epr = 2000;
  res.eff_out = 1.05;
  res.level0 = 0.5 * res.epr * res.out_max;
  res.cost = 1;
  in.hydro_plants.push_back(res);
  HydroPlant ror;
  ror.id = "ROR1";
  ror.zone = zid(1);
  ror.kind = HydroKind::kRunOfRiver;
  ror.programmable = false;
  ror.out_max = 60;
  ror.cost = 0.5;
  in.hydro_plants.push_back(ror);
  if (cand) {
    HydroPlant ps;
    ps.id = "PSC1";
    ps.zone = zid(Z - 1);
    ps.kind = HydroKind::kPumped;
    ps.out_max = 100;
    ps.in_max = 100;
    ps.spill_max = 20;
    ps.epr = 8;
    ps.eff_in = 0.9;
    ps.eff_out = 1.1;
    ps.level0 = 400;
    ps.cost = 1;
    ps.status = AssetStatus::kCandidate;
    ps.invest_cost = round_to(rng.uniform(30000, 90000), 100);
    in.hydro_plants.push_back(ps);
  }

  BatteryTech bat;
  bat.id = "BAT1";
  bat.zone = zid(0);
  bat.epr = 4;
  bat.self_discharge = 0.002;
  bat.eff_in = 0.95;
  bat.eff_out = 1.05;
  bat.cost = 0.5;
  bat.cap0 = 20;
  bat.cap_max = cand ? 300 : 20;
  bat.invest_cost = per_year(round_to(rng.uniform(20000, 50000), 100), -0.03);
  bat.initial_level = 10;
  in.batteries.push_back(bat);

  PtgTech ptg;
  ptg.id = "PTG1";
  ptg.power_zone = zid(0);
  ptg.gas_zone = in.power_zones[0].gas_zone;
  ptg.efficiency = 0.6;
  ptg.cost = 2;
  ptg.cap0 = 0;
  ptg.cap_max = cand ? 100 : 0;
  ptg.invest_cost = round_to(rng.uniform(30000, 80000), 100);
  in.ptg.push_back(ptg);

  for (int z = 0; z < Z; ++z) {
    RenewableZoneData r;
    r.zone = zid(z);
    r.solar0 = round_to(rng.uniform(100, 300), 10);
    r.wind0 = round_to(rng.uniform(50, 200), 10);
    r.solar_min.assign(Y, 0);
    r.wind_min.assign(Y, 0);
    // Build limits keep thermal units on baseload duty.
    r.solar_max.assign(Y, cand ? r.solar0 + 200 : r.solar0);
    r.wind_max.assign(Y, cand ? r.wind0 + 150 : r.wind0);
    r.solar_cost = per_year(round_to(rng.uniform(25000, 40000), 100), -0.03);
    r.wind_cost = per_year(round_to(rng.uniform(35000, 55000), 100), -0.02);
    in.renewables.push_back(r);
  }
  for (const auto& n : in.gas_zones) {
    GasZoneData g;
    g.zone = n;
    g.supply_max = 6000;
    g.inj_max = 150;
    g.wd_max = 150;
    g.storage_max = 2e5;
    g.level0 = 1e5;
    in.gas_zone_data.push_back(g);
  }
  AreaPolicy pol;
  for (int y = 0; y < Y; ++y) {
    pol.res_share.push_back(cand ? 0.10 + 0.05 * y : 0.0);
    pol.co2_cap.push_back(kInfinity);
  }
  in.policy["A1"] = pol;
  in.penalties = {100, 3000, 1000, 3000};

  // Two representative days, winter (0) and summer (1).
  auto& cal = out.calendar;
  for (int y = 0; y < Y; ++y) {
    CalendarYear cy;
    cy.year = in.years[y];
    const int w0 = rng.integer(150, 215);
    cy.clusters = {{"D1", w0}, {"D2", kDaysPerYear - w0}};
    cy.day_map.assign(kDaysPerYear, 1);
    std::fill(cy.day_map.begin(), cy.day_map.begin() + w0, 0);
    rng.shuffle(cy.day_map);
    auto hourly = [&](auto f) {
      std::vector<std::vector<double>> p(2, std::vector<double>(kHours));
      for (int c = 0; c < 2; ++c)
        for (int t = 0; t < kHours; ++t) p[c][t] = round_to(f(c, t), 1e-4);
      return p;
    };
    for (int z = 0; z < Z; ++z) {
      const double base = rng.uniform(500, 800) * std::pow(1.04, y);
      const double peak = rng.uniform(0.6, 0.8);
      cy.solar[zid(z)] = hourly([&](int c, int t) {
        const double s = std::sin(std::numbers::pi * (t - 6) / 12.0);
        return s > 0 ? (c == 0 ? 0.55 : 1.0) * peak * s : 0.0;
      });
      cy.wind[zid(z)] = hourly([&](int c, int) { return rng.uniform(0.15, 0.55) * (c == 0 ? 1.2 : 0.8); });
      cy.demand_power[zid(z)] = hourly([&](int c, int t) {
        return base * (c == 0 ? 1.1 : 0.95) * (0.8 + 0.3 * std::sin(std::numbers::pi * (t - 4) / 16.0));
      });
      cy.reserve[zid(z)] = hourly([&](int, int) { return 0.05 * base; });
    }
    for (const auto& n : in.gas_zones) {
      const double g = rng.uniform(200, 500);
      cy.demand_gas[n] = hourly([&](int c, int) { return g * (c == 0 ? 1.4 : 0.7); });
    }
    cy.inflow["HR1"] = hourly([&](int c, int) { return (c == 0 ? 0.25 : 0.45) * res.out_max; });
    cy.inflow["ROR1"] = hourly([&](int, int) { return rng.uniform(20, 70); });
    if (cand) cy.inflow["PSC1"] = hourly([&](int, int) { return 2.0; });
    cal.years.push_back(cy);
  }

  auto& sc = out.scenarios;
  std::vector<double> prob(W);
  double total = 0;
  for (auto& p : prob) total += (p = o.identical_scenarios ? 1.0 : rng.uniform(0.5, 1.5));
  const double co2 = rng.uniform(40, 80), gas = rng.uniform(25, 40), coal = rng.uniform(8, 14);
  double assigned = 0;
  for (int w = 0; w < W; ++w) {
    Scenario s;
    s.id = "S" + std::to_string(w + 1);
    s.probability = w + 1 < W ? round_to(prob[w] / total, 1e-6) : 1.0 - assigned;
    assigned += s.probability;
    const double f_co2 = o.identical_scenarios ? 1 : rng.uniform(0.6, 1.6);
    const double f_gas = o.identical_scenarios ? 1 : rng.uniform(0.6, 1.8);
    s.co2 = per_year(co2 * f_co2, 0.05);
    s.fuel["coal"] = per_year(coal * (o.identical_scenarios ? 1 : rng.uniform(0.8, 1.2)));
    for (const auto& n : in.gas_zones) s.gas_cost[n] = per_year(gas * f_gas, 0.02);
    sc.scenarios.push_back(s);
  }
  return out;
}

}  // namespace gtep
