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

#ifndef GTEP_SYSTEM_MODEL_HPP
#define GTEP_SYSTEM_MODEL_HPP

#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtep {

// Internal units: power and gas flows in MW / MW_th, energy in MWh / MWh_th,
// capacity-proportional costs in money per MW, energy costs in money per MWh.

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class AssetStatus { kExisting, kCandidate };

struct PowerZone {
  std::string id;
  std::string gas_zone;  // gas zone feeding the zone's gas-fired clusters; may be empty
  bool operator==(const PowerZone&) const = default;
};

struct Area {
  std::string id;
  std::vector<std::string> zones;
  bool operator==(const Area&) const = default;
};

// Transport link; used for both power lines and gas pipelines.
struct Link {
  std::string id, from, to;
  double flow_min = 0;  // <= 0
  double flow_max = 0;  // >= 0
  AssetStatus status = AssetStatus::kExisting;
  double invest_cost = 0;  // lump sum, candidates only
  bool operator==(const Link&) const = default;
};
using TransmissionLine = Link;
using GasPipeline = Link;

struct ThermalCluster {
  std::string id, zone;
  std::string fuel;  // "gas", a priced fuel name, or "none"
  double p_min = 0, p_max = 0;
  double startup_cost = 0;
  double heat_rate = 0;  // Gcal/MWh
  double co2_rate = 0;   // ton/MWh
  double om_cost = 0;
  int mut = 1, mdt = 1;
  int n0 = 0;
  std::vector<int> n_min, n_max;              // per year
  std::vector<double> invest_cost, decom_cost;  // per year, money/MW
  bool gas_fired() const { return fuel == "gas"; }
  bool operator==(const ThermalCluster&) const = default;
};

enum class HydroKind { kRunOfRiver, kReservoir, kPumped };

struct HydroPlant {
  std::string id, zone;
  HydroKind kind = HydroKind::kReservoir;
  bool programmable = true;
  double out_max = 0, in_max = 0, spill_max = 0;
  double epr = 0;  // hours
  double eff_in = 1, eff_out = 1;
  double level0 = 0;  // MWh
  double cost = 0;
  AssetStatus status = AssetStatus::kExisting;
  double invest_cost = 0;  // money/MW of out_max
  bool operator==(const HydroPlant&) const = default;
};

struct BatteryTech {
  std::string id, zone;
  double epr = 0;
  double self_discharge = 0;
  double eff_in = 1, eff_out = 1;
  double cost = 0;
  double cap0 = 0, cap_max = 0;
  std::vector<double> invest_cost;  // per year, money/MW
  double initial_level = 0;         // MWh at hour 0 and 24 of every day
  bool operator==(const BatteryTech&) const = default;
};

struct PtgTech {
  std::string id, power_zone, gas_zone;
  double efficiency = 1;
  double cost = 0;
  double cap0 = 0, cap_max = 0;
  double invest_cost = 0;  // money/MW_th
  bool operator==(const PtgTech&) const = default;
};

struct RenewableZoneData {
  std::string zone;
  double solar0 = 0, wind0 = 0;
  std::vector<double> solar_min, solar_max, wind_min, wind_max;  // cumulative installed, per year
  std::vector<double> solar_cost, wind_cost;                       // per year, money/MW
  bool operator==(const RenewableZoneData&) const = default;
};

struct GasZoneData {
  std::string zone;
  double supply_min = 0, supply_max = 0;
  double inj_max = 0, wd_max = 0;
  double storage_max = 0;
  double eff_in = 1, eff_out = 1;
  double level0 = 0;
  bool operator==(const GasZoneData&) const = default;
};

struct AreaPolicy {
  std::vector<double> res_share;  // per year, fraction of load
  std::vector<double> co2_cap;    // per year, ton; +inf when absent
  bool operator==(const AreaPolicy&) const = default;
};

struct Penalties {
  double overgeneration = 0, energy_not_supplied = 0, reserve_not_supplied = 0, gas_curtailment = 0;
  bool operator==(const Penalties&) const = default;
};

struct SystemInstance {
  int base_year = 0;
  double discount_rate = 0;
  int storage_check_period = 7;  // days
  std::vector<int> years;

  std::vector<PowerZone> power_zones;
  std::vector<std::string> gas_zones;
  std::vector<Area> areas;
  std::vector<TransmissionLine> lines;
  std::vector<GasPipeline> pipelines;
  std::vector<ThermalCluster> thermal_clusters;
  std::vector<HydroPlant> hydro_plants;
  std::vector<BatteryTech> batteries;
  std::vector<PtgTech> ptg;
  std::vector<RenewableZoneData> renewables;
  std::vector<GasZoneData> gas_zone_data;
  std::map<std::string, AreaPolicy> policy;  // by area id
  Penalties penalties;

  int num_years() const { return static_cast<int>(years.size()); }
  int zone_index(const std::string& id) const;      // -1 if unknown
  int gas_zone_index(const std::string& id) const;  // -1 if unknown
  const RenewableZoneData* renewable(const std::string& zone) const;
  const GasZoneData* gas_data(const std::string& zone) const;

  bool operator==(const SystemInstance&) const = default;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ParseError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};
class ReferenceError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};
class SchemaError : public InstanceError {
 public:
  using InstanceError::InstanceError;
};

// Parses the instance document (format in docs/instance-format.md) and
// normalizes declared units.
SystemInstance load_instance(const std::string& text);
SystemInstance load_instance_file(const std::string& path);
// Canonical form: MW and money/MW units, fixed key order.
std::string save_instance(const SystemInstance& inst);

struct RepresentativeCalendar;
struct ScenarioSet;

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the instance alone.
ValidationReport validate_instance(const SystemInstance& inst);
// Instance plus calendar and scenario cross-checks.
ValidationReport validate_instance(const SystemInstance& inst, const RepresentativeCalendar& cal,
                                   const ScenarioSet& scen);

const char* to_string(AssetStatus s);
const char* to_string(HydroKind k);

}  // namespace gtep

#endif  // GTEP_SYSTEM_MODEL_HPP
