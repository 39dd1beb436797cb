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

#include "gtep/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gtep {
namespace {

using Terms = std::vector<std::pair<int, double>>;
constexpr double kInfD = kInf<double>;

int add_row(LpProblem& p, RowSense s, double b, const Terms& t, std::string name) {
  return p.add_row(s, b, std::span<const std::pair<int, double>>(t), std::move(name));
}

std::string str(int v) { return std::to_string(v); }

// Columns of x_y. Copies (subproblem side) carry no cost, no bounds and no
// integrality: the fixing rows alone pin them, so their duals are the full
// sensitivities.
FirstStageRefs add_x_columns(LpProblem& p, const ModelData& d, int yi, bool copy) {
  const auto& in = d.instance();
  const auto& cy = d.calendar(yi);
  const std::string ys = str(in.years[yi]);
  const double df = d.discount(yi);
  FirstStageRefs r;
  auto add = [&](double cost, double lo, double hi, bool integer, std::string name) {
    const int j = copy ? p.add_column(0, -kInfD, kInfD, false, std::move(name))
                       : p.add_column(cost, lo, hi, integer, std::move(name));
    r.cols.push_back(j);
    return j;
  };

  r.delta_line.assign(in.lines.size(), -1);
  r.theta_line.assign(in.lines.size(), -1);
  for (size_t l = 0; l < in.lines.size(); ++l) {
    const auto& ln = in.lines[l];
    if (ln.status != AssetStatus::kCandidate) continue;
    r.delta_line[l] = add(df * ln.invest_cost, 0, 1, true, make_label("delta_L", {{"l", ln.id}, {"y", ys}}));
    r.theta_line[l] = add(0, 0, 1, true, make_label("theta_L", {{"l", ln.id}, {"y", ys}}));
  }
  r.delta_pipe.assign(in.pipelines.size(), -1);
  r.theta_pipe.assign(in.pipelines.size(), -1);
  for (size_t j = 0; j < in.pipelines.size(); ++j) {
    const auto& pl = in.pipelines[j];
    if (pl.status != AssetStatus::kCandidate) continue;
    r.delta_pipe[j] = add(df * pl.invest_cost, 0, 1, true, make_label("delta_J", {{"j", pl.id}, {"y", ys}}));
    r.theta_pipe[j] = add(0, 0, 1, true, make_label("theta_J", {{"j", pl.id}, {"y", ys}}));
  }
  r.delta_hydro.assign(in.hydro_plants.size(), -1);
  r.theta_hydro.assign(in.hydro_plants.size(), -1);
  for (size_t h = 0; h < in.hydro_plants.size(); ++h) {
    const auto& hp = in.hydro_plants[h];
    if (hp.status != AssetStatus::kCandidate) continue;
    r.delta_hydro[h] =
        add(df * hp.invest_cost * hp.out_max, 0, 1, true, make_label("delta_H", {{"h", hp.id}, {"y", ys}}));
    r.theta_hydro[h] = add(0, 0, 1, true, make_label("theta_H", {{"h", hp.id}, {"y", ys}}));
  }
  for (const auto& k : in.thermal_clusters) {
    r.n_units.push_back(add(0, k.n_min[yi], k.n_max[yi], true, make_label("N", {{"k", k.id}, {"y", ys}})));
    r.n_plus.push_back(add(df * k.invest_cost[yi] * k.p_max, 0, kInfD, true,
                           make_label("N_plus", {{"k", k.id}, {"y", ys}})));
    r.n_minus.push_back(add(df * k.decom_cost[yi] * k.p_max, 0, kInfD, true,
                            make_label("N_minus", {{"k", k.id}, {"y", ys}})));
  }
  for (const auto& z : in.power_zones) {
    const auto* rz = in.renewable(z.id);
    const double sc = rz ? rz->solar_cost[yi] : 0, wc = rz ? rz->wind_cost[yi] : 0;
    r.solar_add.push_back(add(df * sc, 0, kInfD, false, make_label("S", {{"z", z.id}, {"y", ys}})));
    r.wind_add.push_back(add(df * wc, 0, kInfD, false, make_label("W", {{"z", z.id}, {"y", ys}})));
    r.solar_total.push_back(add(0, rz ? rz->solar_min[yi] : 0, rz ? rz->solar_max[yi] : 0, false,
                                make_label("S_tot", {{"z", z.id}, {"y", ys}})));
    r.wind_total.push_back(add(0, rz ? rz->wind_min[yi] : 0, rz ? rz->wind_max[yi] : 0, false,
                               make_label("W_tot", {{"z", z.id}, {"y", ys}})));
  }
  for (const auto& b : in.batteries) {
    r.bat_add.push_back(add(df * b.invest_cost[yi], 0, kInfD, false, make_label("B_CAP", {{"b", b.id}, {"y", ys}})));
    r.bat_avail.push_back(add(0, 0, b.cap_max, false, make_label("B_avail", {{"b", b.id}, {"y", ys}})));
  }
  for (const auto& g : in.ptg) {
    r.ptg_add.push_back(add(df * g.invest_cost, 0, kInfD, false, make_label("PtG_CAP", {{"g", g.id}, {"y", ys}})));
    r.ptg_avail.push_back(add(0, 0, g.cap_max, false, make_label("PtG_avail", {{"g", g.id}, {"y", ys}})));
  }
  const int Z = static_cast<int>(in.power_zones.size()), C = cy.num_clusters();
  r.res.resize(Z, C, kHours);
  for (int z = 0; z < Z; ++z)
    for (int c = 0; c < C; ++c)
      for (int t = 0; t < kHours; ++t)
        r.res(z, c, t) = add(0, 0, kInfD, false,
                             make_label("RES", {{"z", in.power_zones[z].id},
                                                {"t", str(t + 1)},
                                                {"c", cy.clusters[c].id},
                                                {"y", ys}}));
  return r;
}

// First-stage constraints over all years plus the RES penetration rows.
void add_x_rows(LpProblem& p, const ModelData& d, const std::vector<FirstStageRefs>& x) {
  const auto& in = d.instance();
  const int Y = d.num_years();
  auto cumulative = [&](const char* name, const char* key, const std::string& id, int yi, int total,
                        auto additions, double start) {
    Terms t{{total, 1.0}};
    for (int i = 0; i <= yi; ++i) t.emplace_back(additions(i), -1.0);
    add_row(p, RowSense::kEqual, start, t, make_label(name, {{key, id}, {"y", str(in.years[yi])}}));
  };
  for (int yi = 0; yi < Y; ++yi) {
    const auto& xr = x[yi];
    for (size_t l = 0; l < in.lines.size(); ++l)
      if (xr.theta_line[l] >= 0)
        cumulative("inv_L", "l", in.lines[l].id, yi, xr.theta_line[l], [&](int i) { return x[i].delta_line[l]; }, 0);
    for (size_t j = 0; j < in.pipelines.size(); ++j)
      if (xr.theta_pipe[j] >= 0)
        cumulative("inv_J", "j", in.pipelines[j].id, yi, xr.theta_pipe[j], [&](int i) { return x[i].delta_pipe[j]; },
                   0);
    for (size_t h = 0; h < in.hydro_plants.size(); ++h)
      if (xr.theta_hydro[h] >= 0)
        cumulative("inv_H", "h", in.hydro_plants[h].id, yi, xr.theta_hydro[h],
                   [&](int i) { return x[i].delta_hydro[h]; }, 0);
    for (size_t k = 0; k < in.thermal_clusters.size(); ++k) {
      const auto& kc = in.thermal_clusters[k];
      Terms t{{xr.n_units[k], 1.0}, {xr.n_plus[k], -1.0}, {xr.n_minus[k], 1.0}};
      if (yi > 0) t.emplace_back(x[yi - 1].n_units[k], -1.0);
      add_row(p, RowSense::kEqual, yi == 0 ? kc.n0 : 0, t, make_label("inv_N", {{"k", kc.id}, {"y", str(in.years[yi])}}));
    }
    for (size_t z = 0; z < in.power_zones.size(); ++z) {
      const auto* rz = in.renewable(in.power_zones[z].id);
      cumulative("tot_S", "z", in.power_zones[z].id, yi, xr.solar_total[z], [&](int i) { return x[i].solar_add[z]; },
                 rz ? rz->solar0 : 0);
      cumulative("tot_W", "z", in.power_zones[z].id, yi, xr.wind_total[z], [&](int i) { return x[i].wind_add[z]; },
                 rz ? rz->wind0 : 0);
    }
    for (size_t b = 0; b < in.batteries.size(); ++b)
      cumulative("inv_B", "b", in.batteries[b].id, yi, xr.bat_avail[b], [&](int i) { return x[i].bat_add[b]; },
                 in.batteries[b].cap0);
    for (size_t g = 0; g < in.ptg.size(); ++g)
      cumulative("inv_PtG", "g", in.ptg[g].id, yi, xr.ptg_avail[g], [&](int i) { return x[i].ptg_add[g]; },
                 in.ptg[g].cap0);

    const auto& cy = d.calendar(yi);
    for (size_t z = 0; z < in.power_zones.size(); ++z)
      for (int c = 0; c < cy.num_clusters(); ++c)
        for (int t = 0; t < kHours; ++t) {
          const std::string& zid = in.power_zones[z].id;
          add_row(p, RowSense::kEqual, 0,
                  {{xr.res(z, c, t), 1.0},
                   {xr.solar_total[z], -CalendarYear::at(cy.solar, zid, c, t)},
                   {xr.wind_total[z], -CalendarYear::at(cy.wind, zid, c, t)}},
                  make_label("def_RES", {{"z", zid}, {"t", str(t + 1)}, {"c", cy.clusters[c].id},
                                         {"y", str(in.years[yi])}}));
        }

    for (const auto& a : in.areas) {
      auto it = in.policy.find(a.id);
      if (it == in.policy.end() || !(it->second.res_share[yi] > 0)) continue;
      Terms t;
      double demand = 0;
      for (const auto& zid : a.zones) {
        const int z = in.zone_index(zid);
        for (int c = 0; c < cy.num_clusters(); ++c) {
          const double psi = cy.clusters[c].weight;
          for (int h = 0; h < kHours; ++h) {
            t.emplace_back(xr.res(z, c, h), psi);
            demand += psi * CalendarYear::at(cy.demand_power, zid, c, h);
          }
        }
      }
      add_row(p, RowSense::kGreaterEqual, it->second.res_share[yi] * demand, t,
              make_label("pen", {{"a", a.id}, {"y", str(in.years[yi])}}));
    }
  }
}

// Second-stage block of (yi, wi). `weight` scales every cost (pb_w in the
// monolithic problem, 1 in a subproblem).
OperationRefs add_operations(LpProblem& p, const ModelData& d, int yi, int wi, const FirstStageRefs& x,
                             double weight, const BuildOptions& o) {
  const auto& in = d.instance();
  const auto& cy = d.calendar(yi);
  const auto& sc = d.scenarios().scenarios[wi];
  const auto& pen = in.penalties;
  const int C = cy.num_clusters(), T = kHours;
  const int K = static_cast<int>(in.thermal_clusters.size()), H = static_cast<int>(in.hydro_plants.size()),
            B = static_cast<int>(in.batteries.size()), L = static_cast<int>(in.lines.size()),
            Z = static_cast<int>(in.power_zones.size()), G = static_cast<int>(in.ptg.size()),
            N = static_cast<int>(in.gas_zones.size()), J = static_cast<int>(in.pipelines.size());
  const std::string ys = str(in.years[yi]), ws = sc.id;
  const double wt = weight * (o.discount_operations ? d.discount(yi) : 1.0);
  const bool uc_int = !o.relax_uc;

  OperationRefs r;
  r.year = yi;
  r.scenario = wi;
  r.alpha.resize(K, C, T);
  r.beta.resize(K, C, T);
  r.gamma.resize(K, C, T + 1);
  r.p.resize(K, C, T);
  r.h_out.resize(H, C, T);
  r.h_in.resize(H, C, T);
  r.h_spill.resize(H, C, T);
  r.bat.resize(B, C, T);
  r.bat_in.resize(B, C, T);
  r.bat_out.resize(B, C, T);
  r.f_line.resize(L, C, T);
  r.og.resize(Z, C, T);
  r.enp.resize(Z, C, T);
  r.rnp.resize(Z, C, T);
  r.g_ptg.resize(G, C, T);
  r.g_sup.resize(N, C, T);
  r.g_in.resize(N, C, T);
  r.g_out.resize(N, C, T);
  r.g_curt.resize(N, C, T);
  r.f_pipe.resize(J, C, T);

  auto lab = [&](const char* sym, const char* key, const std::string& id, int c, int t) {
    return make_label(sym, {{key, id}, {"t", str(t)}, {"c", cy.clusters[c].id}, {"y", ys}, {"w", ws}});
  };
  auto zlab = [&](const char* sym, int z, int c, int t) { return lab(sym, "z", in.power_zones[z].id, c, t); };

  std::vector<double> cm(K);
  for (int k = 0; k < K; ++k) cm[k] = marginal_cost(in.thermal_clusters[k], yi, sc);
  std::vector<double> gas_price(N, 0.0);
  for (int n = 0; n < N; ++n) {
    auto it = sc.gas_cost.find(in.gas_zones[n]);
    if (it == sc.gas_cost.end() || static_cast<int>(it->second.size()) <= yi)
      throw MissingPriceError("scenario " + sc.id + ": no gas cost for zone " + in.gas_zones[n]);
    gas_price[n] = it->second[yi];
  }

  // Columns.
  for (int c = 0; c < C; ++c) {
    const double psi = cy.clusters[c].weight;
    const double cw = wt * psi;
    for (int k = 0; k < K; ++k) {
      const auto& kc = in.thermal_clusters[k];
      r.gamma(k, c, 0) = p.add_column(0, 0, kInfD, uc_int, lab("gamma", "k", kc.id, c, 0));
    }
    for (int t = 0; t < T; ++t) {
      for (int k = 0; k < K; ++k) {
        const auto& kc = in.thermal_clusters[k];
        r.alpha(k, c, t) = p.add_column(cw * kc.startup_cost, 0, kInfD, uc_int, lab("alpha", "k", kc.id, c, t + 1));
        r.beta(k, c, t) = p.add_column(0, 0, kInfD, uc_int, lab("beta", "k", kc.id, c, t + 1));
        r.gamma(k, c, t + 1) = p.add_column(cw * cm[k] * kc.p_min, 0, kInfD, uc_int, lab("gamma", "k", kc.id, c, t + 1));
        r.p(k, c, t) = p.add_column(cw * cm[k], 0, kInfD, false, lab("p", "k", kc.id, c, t + 1));
      }
      for (int h = 0; h < H; ++h) {
        const auto& hp = in.hydro_plants[h];
        double ub = hp.out_max;
        if (!hp.programmable) ub = std::min(ub, CalendarYear::at(cy.inflow, hp.id, c, t));
        r.h_out(h, c, t) = p.add_column(cw * hp.cost, 0, ub, false, lab("H_OUT", "h", hp.id, c, t + 1));
        if (hp.programmable) {
          r.h_in(h, c, t) = p.add_column(0, 0, hp.in_max, false, lab("H_IN", "h", hp.id, c, t + 1));
          r.h_spill(h, c, t) = p.add_column(0, 0, hp.spill_max, false, lab("H_SPILL", "h", hp.id, c, t + 1));
        }
      }
      for (int b = 0; b < B; ++b) {
        const auto& bt = in.batteries[b];
        r.bat(b, c, t) = p.add_column(0, 0, kInfD, false, lab("B", "b", bt.id, c, t + 1));
        r.bat_in(b, c, t) = p.add_column(0, 0, kInfD, false, lab("B_IN", "b", bt.id, c, t + 1));
        r.bat_out(b, c, t) = p.add_column(cw * bt.cost, 0, kInfD, false, lab("B_OUT", "b", bt.id, c, t + 1));
      }
      for (int l = 0; l < L; ++l) {
        const auto& ln = in.lines[l];
        r.f_line(l, c, t) = p.add_column(0, ln.flow_min, ln.flow_max, false, lab("F_L", "l", ln.id, c, t + 1));
      }
      for (int z = 0; z < Z; ++z) {
        r.og(z, c, t) = p.add_column(cw * pen.overgeneration, 0, kInfD, false, zlab("OG", z, c, t + 1));
        r.enp(z, c, t) = p.add_column(cw * pen.energy_not_supplied, 0, kInfD, false, zlab("ENP", z, c, t + 1));
        r.rnp(z, c, t) = p.add_column(cw * pen.reserve_not_supplied, 0, kInfD, false, zlab("RNP", z, c, t + 1));
      }
      for (int g = 0; g < G; ++g) {
        const auto& pt = in.ptg[g];
        r.g_ptg(g, c, t) = p.add_column(cw * pt.cost, 0, kInfD, false, lab("G_PtG", "g", pt.id, c, t + 1));
      }
      for (int n = 0; n < N; ++n) {
        const auto* gd = in.gas_data(in.gas_zones[n]);
        const std::string& nid = in.gas_zones[n];
        r.g_sup(n, c, t) = p.add_column(cw * gas_price[n], gd ? gd->supply_min : 0, gd ? gd->supply_max : 0, false,
                                        lab("G", "n", nid, c, t + 1));
        r.g_in(n, c, t) = p.add_column(0, 0, gd ? gd->inj_max : 0, false, lab("G_IN", "n", nid, c, t + 1));
        r.g_out(n, c, t) = p.add_column(0, 0, gd ? gd->wd_max : 0, false, lab("G_OUT", "n", nid, c, t + 1));
        r.g_curt(n, c, t) = p.add_column(cw * pen.gas_curtailment, 0, kInfD, false, lab("G_CURT", "n", nid, c, t + 1));
      }
      for (int j = 0; j < J; ++j) {
        const auto& pl = in.pipelines[j];
        r.f_pipe(j, c, t) = p.add_column(0, pl.flow_min, pl.flow_max, false, lab("F_J", "j", pl.id, c, t + 1));
      }
    }
  }
  const auto& chain = d.chain(yi);
  const int XI = chain.num_checkpoints;
  r.h_lt.assign(H, {});
  for (int h = 0; h < H; ++h) {
    const auto& hp = in.hydro_plants[h];
    if (!hp.programmable) continue;
    for (int xi = 1; xi <= XI; ++xi)
      r.h_lt[h].push_back(p.add_column(0, 0, hp.epr * hp.out_max, false,
                                       make_label("H_LT", {{"h", hp.id}, {"xi", str(xi)}, {"y", ys}, {"w", ws}})));
  }
  r.g_lt.assign(N, {});
  for (int n = 0; n < N; ++n) {
    const auto* gd = in.gas_data(in.gas_zones[n]);
    for (int xi = 1; xi <= XI; ++xi)
      r.g_lt[n].push_back(p.add_column(0, 0, gd ? gd->storage_max : 0, false,
                                       make_label("G_LT", {{"n", in.gas_zones[n]}, {"xi", str(xi)}, {"y", ys}, {"w", ws}})));
  }

  // Rows.
  for (int c = 0; c < C; ++c) {
    for (int k = 0; k < K; ++k) {
      const auto& kc = in.thermal_clusters[k];
      add_row(p, RowSense::kLessEqual, 0, {{r.gamma(k, c, 0), 1.0}, {x.n_units[k], -1.0}},
              lab("on_max", "k", kc.id, c, 0));
      for (int t = 0; t < T; ++t) {
        const int g = r.gamma(k, c, t + 1);
        add_row(p, RowSense::kLessEqual, 0, {{g, 1.0}, {x.n_units[k], -1.0}}, lab("on_max", "k", kc.id, c, t + 1));
        add_row(p, RowSense::kEqual, 0,
                {{g, 1.0}, {r.gamma(k, c, t), -1.0}, {r.alpha(k, c, t), -1.0}, {r.beta(k, c, t), 1.0}},
                lab("uc", "k", kc.id, c, t + 1));
        if (t + 1 >= kc.mut) {
          Terms tm{{g, -1.0}};
          for (int tau = t + 1 - kc.mut; tau <= t; ++tau) tm.emplace_back(r.alpha(k, c, tau), 1.0);
          add_row(p, RowSense::kLessEqual, 0, tm, lab("mut", "k", kc.id, c, t + 1));
        }
        if (t + 1 >= kc.mdt) {
          Terms tm{{g, 1.0}, {x.n_units[k], -1.0}};
          for (int tau = t + 1 - kc.mdt; tau <= t; ++tau) tm.emplace_back(r.beta(k, c, tau), 1.0);
          add_row(p, RowSense::kLessEqual, 0, tm, lab("mdt", "k", kc.id, c, t + 1));
        }
        add_row(p, RowSense::kLessEqual, 0, {{r.p(k, c, t), 1.0}, {g, -(kc.p_max - kc.p_min)}},
                lab("p_max", "k", kc.id, c, t + 1));
      }
    }

    for (int t = 0; t < T; ++t) {
      for (int h = 0; h < H; ++h) {
        const auto& hp = in.hydro_plants[h];
        const int th = x.theta_hydro[h];
        if (th < 0) continue;
        add_row(p, RowSense::kLessEqual, 0, {{r.h_out(h, c, t), 1.0}, {th, -hp.out_max}},
                lab("H_OUT_new", "h", hp.id, c, t + 1));
        if (hp.programmable) {
          add_row(p, RowSense::kLessEqual, 0, {{r.h_in(h, c, t), 1.0}, {th, -hp.in_max}},
                  lab("H_IN_new", "h", hp.id, c, t + 1));
          add_row(p, RowSense::kLessEqual, 0, {{r.h_spill(h, c, t), 1.0}, {th, -hp.spill_max}},
                  lab("H_SPILL_new", "h", hp.id, c, t + 1));
        }
      }
      for (int b = 0; b < B; ++b) {
        const auto& bt = in.batteries[b];
        Terms lv{{r.bat(b, c, t), 1.0}, {r.bat_in(b, c, t), -bt.eff_in}, {r.bat_out(b, c, t), bt.eff_out}};
        double rhs = 0;
        if (t > 0) lv.emplace_back(r.bat(b, c, t - 1), -(1 - bt.self_discharge));
        else rhs = (1 - bt.self_discharge) * bt.initial_level;
        add_row(p, RowSense::kEqual, rhs, lv, lab("bat_level", "b", bt.id, c, t + 1));
        add_row(p, RowSense::kLessEqual, 0, {{r.bat(b, c, t), 1.0}, {x.bat_avail[b], -bt.epr}},
                lab("bat_inst", "b", bt.id, c, t + 1));
        add_row(p, RowSense::kLessEqual, 0, {{r.bat_in(b, c, t), 1.0}, {x.bat_avail[b], -1.0}},
                lab("bat_in", "b", bt.id, c, t + 1));
        add_row(p, RowSense::kLessEqual, 0, {{r.bat_out(b, c, t), 1.0}, {x.bat_avail[b], -1.0}},
                lab("bat_out", "b", bt.id, c, t + 1));
        if (t == T - 1)
          add_row(p, RowSense::kEqual, bt.initial_level, {{r.bat(b, c, t), 1.0}}, lab("bat_final", "b", bt.id, c, t + 1));
      }
      for (int l = 0; l < L; ++l) {
        const auto& ln = in.lines[l];
        const int th = x.theta_line[l];
        if (th < 0) continue;
        add_row(p, RowSense::kLessEqual, 0, {{r.f_line(l, c, t), 1.0}, {th, -ln.flow_max}},
                lab("flow_L_max", "l", ln.id, c, t + 1));
        add_row(p, RowSense::kGreaterEqual, 0, {{r.f_line(l, c, t), 1.0}, {th, -ln.flow_min}},
                lab("flow_L_min", "l", ln.id, c, t + 1));
      }
      for (int j = 0; j < J; ++j) {
        const auto& pl = in.pipelines[j];
        const int th = x.theta_pipe[j];
        if (th < 0) continue;
        add_row(p, RowSense::kLessEqual, 0, {{r.f_pipe(j, c, t), 1.0}, {th, -pl.flow_max}},
                lab("flow_J_max", "j", pl.id, c, t + 1));
        add_row(p, RowSense::kGreaterEqual, 0, {{r.f_pipe(j, c, t), 1.0}, {th, -pl.flow_min}},
                lab("flow_J_min", "j", pl.id, c, t + 1));
      }
      for (int g = 0; g < G; ++g)
        add_row(p, RowSense::kLessEqual, 0, {{r.g_ptg(g, c, t), 1.0}, {x.ptg_avail[g], -1.0}},
                lab("PtG_prod", "g", in.ptg[g].id, c, t + 1));

      for (int z = 0; z < Z; ++z) {
        const std::string& zid = in.power_zones[z].id;
        Terms bal{{x.res(z, c, t), 1.0}, {r.enp(z, c, t), 1.0}, {r.og(z, c, t), -1.0}};
        Terms res{{r.rnp(z, c, t), 1.0}};
        for (int k = 0; k < K; ++k) {
          if (d.cluster_zone(k) != z) continue;
          const auto& kc = in.thermal_clusters[k];
          bal.emplace_back(r.gamma(k, c, t + 1), kc.p_min);
          bal.emplace_back(r.p(k, c, t), 1.0);
          res.emplace_back(r.gamma(k, c, t + 1), kc.p_max - kc.p_min);
          res.emplace_back(r.p(k, c, t), -1.0);
        }
        for (int h = 0; h < H; ++h) {
          if (in.hydro_plants[h].zone != zid) continue;
          bal.emplace_back(r.h_out(h, c, t), 1.0);
          if (r.h_in(h, c, t) >= 0) bal.emplace_back(r.h_in(h, c, t), -1.0);
        }
        for (int b = 0; b < B; ++b) {
          if (in.batteries[b].zone != zid) continue;
          bal.emplace_back(r.bat_out(b, c, t), 1.0);
          bal.emplace_back(r.bat_in(b, c, t), -1.0);
        }
        for (int l = 0; l < L; ++l) {
          if (in.lines[l].to == zid) bal.emplace_back(r.f_line(l, c, t), 1.0);
          if (in.lines[l].from == zid) bal.emplace_back(r.f_line(l, c, t), -1.0);
        }
        for (int g = 0; g < G; ++g)
          if (in.ptg[g].power_zone == zid) bal.emplace_back(r.g_ptg(g, c, t), -1.0 / in.ptg[g].efficiency);
        add_row(p, RowSense::kEqual, CalendarYear::at(cy.demand_power, zid, c, t), bal, zlab("bal_P", z, c, t + 1));
        add_row(p, RowSense::kGreaterEqual, CalendarYear::at(cy.reserve, zid, c, t), res, zlab("reserve", z, c, t + 1));
      }

      for (int n = 0; n < N; ++n) {
        const std::string& nid = in.gas_zones[n];
        Terms bal{{r.g_sup(n, c, t), 1.0}, {r.g_out(n, c, t), 1.0}, {r.g_curt(n, c, t), 1.0}, {r.g_in(n, c, t), -1.0}};
        for (int g = 0; g < G; ++g)
          if (in.ptg[g].gas_zone == nid) bal.emplace_back(r.g_ptg(g, c, t), 1.0);
        for (int j = 0; j < J; ++j) {
          if (in.pipelines[j].to == nid) bal.emplace_back(r.f_pipe(j, c, t), 1.0);
          if (in.pipelines[j].from == nid) bal.emplace_back(r.f_pipe(j, c, t), -1.0);
        }
        for (int k = 0; k < K; ++k) {
          if (d.cluster_gas_zone(k) != n) continue;
          const auto& kc = in.thermal_clusters[k];
          bal.emplace_back(r.gamma(k, c, t + 1), -kc.heat_rate * kc.p_min);
          bal.emplace_back(r.p(k, c, t), -kc.heat_rate);
        }
        add_row(p, RowSense::kEqual, CalendarYear::at(cy.demand_gas, nid, c, t), bal, lab("bal_G", "n", nid, c, t + 1));
      }
    }
  }

  // Long-term storage chains. Interior segment xi:
  //   LT_xi - LT_{xi-1} - sum(net inflow) = (xi == 1 ? level0 : 0)
  // and the wrap: LT_last + sum_tail(net inflow) = level0.
  for (int h = 0; h < H; ++h) {
    const auto& hp = in.hydro_plants[h];
    if (!hp.programmable) continue;
    const int th = x.theta_hydro[h];
    for (const auto& seg : chain.segments) {
      const bool tail = seg.checkpoint == 0;
      const double sgn = tail ? 1.0 : -1.0;  // sign of the net-inflow sum on the left
      Terms t;
      double inflow = 0;
      for (int c = 0; c < C; ++c) {
        const double days = seg.cluster_days[c];
        if (days == 0) continue;
        for (int hr = 0; hr < T; ++hr) {
          t.emplace_back(r.h_in(h, c, hr), sgn * hp.eff_in * days);
          t.emplace_back(r.h_out(h, c, hr), -sgn * hp.eff_out * days);
          t.emplace_back(r.h_spill(h, c, hr), -sgn * days);
          inflow += days * CalendarYear::at(cy.inflow, hp.id, c, hr);
        }
      }
      double rhs;
      if (tail) {
        t.emplace_back(r.h_lt[h][XI - 1], 1.0);
        rhs = hp.level0;
      } else {
        t.emplace_back(r.h_lt[h][seg.checkpoint - 1], 1.0);
        if (seg.checkpoint > 1) t.emplace_back(r.h_lt[h][seg.checkpoint - 2], -1.0);
        rhs = seg.checkpoint == 1 ? hp.level0 : 0.0;
      }
      // Inflow enters with theta for candidates (theta = 1 for existing plants).
      if (th >= 0) t.emplace_back(th, sgn * inflow);
      else rhs -= sgn * inflow;
      add_row(p, RowSense::kEqual, rhs, t,
              tail ? make_label("hydro_LT_wrap", {{"h", hp.id}, {"y", ys}, {"w", ws}})
                   : make_label("hydro_LT", {{"h", hp.id}, {"xi", str(seg.checkpoint)}, {"y", ys}, {"w", ws}}));
    }
  }
  for (int n = 0; n < N; ++n) {
    const auto* gd = in.gas_data(in.gas_zones[n]);
    const double ein = gd ? gd->eff_in : 1, eout = gd ? gd->eff_out : 1, level0 = gd ? gd->level0 : 0;
    for (const auto& seg : chain.segments) {
      const bool tail = seg.checkpoint == 0;
      const double sgn = tail ? 1.0 : -1.0;
      Terms t;
      for (int c = 0; c < C; ++c) {
        const double days = seg.cluster_days[c];
        if (days == 0) continue;
        for (int hr = 0; hr < T; ++hr) {
          t.emplace_back(r.g_in(n, c, hr), sgn * ein * days);
          t.emplace_back(r.g_out(n, c, hr), -sgn * eout * days);
        }
      }
      double rhs;
      if (tail) {
        t.emplace_back(r.g_lt[n][XI - 1], 1.0);
        rhs = level0;
      } else {
        t.emplace_back(r.g_lt[n][seg.checkpoint - 1], 1.0);
        if (seg.checkpoint > 1) t.emplace_back(r.g_lt[n][seg.checkpoint - 2], -1.0);
        rhs = seg.checkpoint == 1 ? level0 : 0.0;
      }
      add_row(p, RowSense::kEqual, rhs, t,
              tail ? make_label("gas_LT_wrap", {{"n", in.gas_zones[n]}, {"y", ys}, {"w", ws}})
                   : make_label("gas_LT", {{"n", in.gas_zones[n]}, {"xi", str(seg.checkpoint)}, {"y", ys}, {"w", ws}}));
    }
  }

  for (const auto& a : in.areas) {
    auto it = in.policy.find(a.id);
    if (it == in.policy.end() || !std::isfinite(it->second.co2_cap[yi])) continue;
    Terms t;
    for (int k = 0; k < K; ++k) {
      const auto& kc = in.thermal_clusters[k];
      if (d.area_of_zone(d.cluster_zone(k)) < 0 || in.areas[d.area_of_zone(d.cluster_zone(k))].id != a.id) continue;
      for (int c = 0; c < C; ++c) {
        const double psi = cy.clusters[c].weight;
        for (int hr = 0; hr < T; ++hr) {
          t.emplace_back(r.gamma(k, c, hr + 1), psi * kc.co2_rate * kc.p_min);
          t.emplace_back(r.p(k, c, hr), psi * kc.co2_rate);
        }
      }
    }
    add_row(p, RowSense::kLessEqual, it->second.co2_cap[yi], t,
            make_label("CO2", {{"a", a.id}, {"y", ys}, {"w", ws}}));
  }
  return r;
}

double value_at(const Eigen::VectorXd& v, int j) { return j >= 0 ? v[j] : 0.0; }

}  // namespace

// ---- Prices and data --------------------------------------------------------

double marginal_cost(const ThermalCluster& k, int yi, const Scenario& w) {
  if (yi < 0 || yi >= static_cast<int>(w.co2.size()))
    throw MissingPriceError("scenario " + w.id + ": no CO2 price for year position " + str(yi));
  double c = k.om_cost + k.co2_rate * w.co2[yi];
  if (!k.gas_fired() && k.fuel != "none") {
    auto it = w.fuel.find(k.fuel);
    if (it == w.fuel.end() || yi >= static_cast<int>(it->second.size()))
      throw MissingPriceError("scenario " + w.id + ": no price for fuel " + k.fuel);
    c += k.heat_rate * it->second[yi];
  }
  return c;
}

ModelData::ModelData(SystemInstance inst, RepresentativeCalendar cal, ScenarioSet scen)
    : inst_(std::move(inst)), cal_(std::move(cal)), scen_(std::move(scen)) {
  const auto rep = validate_instance(inst_, cal_, scen_);
  if (!rep.ok()) {
    std::string msg = "invalid model data:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  for (int y : inst_.years) {
    for (size_t i = 0; i < cal_.years.size(); ++i)
      if (cal_.years[i].year == y) cal_index_.push_back(static_cast<int>(i));
  }
  for (int yi = 0; yi < num_years(); ++yi) chains_.push_back(expand_checkpoints(calendar(yi), inst_.storage_check_period));
  for (const auto& k : inst_.thermal_clusters) {
    const int z = inst_.zone_index(k.zone);
    cluster_zone_.push_back(z);
    cluster_gas_.push_back(k.gas_fired() ? inst_.gas_zone_index(inst_.power_zones[z].gas_zone) : -1);
  }
  zone_area_.assign(inst_.power_zones.size(), -1);
  for (size_t a = 0; a < inst_.areas.size(); ++a)
    for (const auto& z : inst_.areas[a].zones) zone_area_[inst_.zone_index(z)] = static_cast<int>(a);
}

double ModelData::discount(int yi) const {
  return 1.0 / std::pow(1.0 + inst_.discount_rate, inst_.years[yi] - inst_.base_year);
}

// ---- Labels -----------------------------------------------------------------

std::string make_label(const std::string& symbol, std::initializer_list<std::pair<const char*, std::string>> idx) {
  std::string out = symbol;
  out += '[';
  bool first = true;
  for (const auto& [k, v] : idx) {
    if (!first) out += ',';
    first = false;
    out += k;
    out += '=';
    out += v;
  }
  out += ']';
  return out;
}

const std::string& ParsedLabel::at(const std::string& key) const {
  for (const auto& [k, v] : indices)
    if (k == key) return v;
  throw std::out_of_range("label has no index '" + key + "'");
}

ParsedLabel parse_label(const std::string& label) {
  const auto open = label.find('[');
  if (open == std::string::npos || open == 0 || label.back() != ']')
    throw std::invalid_argument("malformed label '" + label + "'");
  ParsedLabel out;
  out.symbol = label.substr(0, open);
  const std::string body = label.substr(open + 1, label.size() - open - 2);
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("malformed label '" + label + "'");
    out.indices.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

// ---- Builders ---------------------------------------------------------------

MonolithicProblem build_monolithic(const ModelData& d, const BuildOptions& o) {
  MonolithicProblem m;
  for (int yi = 0; yi < d.num_years(); ++yi) m.x.push_back(add_x_columns(m.lp, d, yi, false));
  add_x_rows(m.lp, d, m.x);
  m.ops.resize(d.num_years());
  for (int yi = 0; yi < d.num_years(); ++yi)
    for (int wi = 0; wi < d.num_scenarios(); ++wi)
      m.ops[yi].push_back(add_operations(m.lp, d, yi, wi, m.x[yi], d.scenarios().scenarios[wi].probability, o));
  return m;
}

MasterProblem build_master(const ModelData& d, std::span<const Cut> cuts, int iteration, const BuildOptions&) {
  MasterProblem m;
  for (int yi = 0; yi < d.num_years(); ++yi) m.x.push_back(add_x_columns(m.lp, d, yi, false));
  add_x_rows(m.lp, d, m.x);
  const bool first = iteration <= 1;
  for (const auto& w : d.scenarios().scenarios)
    m.theta.push_back(m.lp.add_column(w.probability, first ? 0 : -kInfD, first ? 0 : kInfD, false,
                                      make_label("theta", {{"w", w.id}})));
  for (const auto& c : cuts) add_cut_row(m, c);
  return m;
}

void add_cut_row(MasterProblem& m, const Cut& cut) {
  Terms t{{m.theta.at(cut.scenario), 1.0}};
  for (size_t yi = 0; yi < cut.years.size(); ++yi) {
    const auto& a = cut.years[yi];
    const auto& cols = m.x.at(yi).cols;
    if (a.lambda.size() != cols.size()) throw std::invalid_argument("cut does not match the master layout");
    for (size_t i = 0; i < cols.size(); ++i) t.emplace_back(cols[i], -a.lambda[i]);
  }
  add_row(m.lp, RowSense::kGreaterEqual, cut.constant(), t,
          make_label("cut", {{"nu", str(cut.iteration)}, {"w", str(cut.scenario)}}));
}

SubProblem build_subproblem(const ModelData& d, int yi, int wi, const InvestmentPlan& plan, const BuildOptions& o) {
  if (yi < 0 || yi >= d.num_years() || wi < 0 || wi >= d.num_scenarios())
    throw std::invalid_argument("subproblem index out of range");
  SubProblem s;
  s.year = yi;
  s.scenario = wi;
  s.x = add_x_columns(s.lp, d, yi, true);
  if (static_cast<int>(plan.values.size()) <= yi || plan.values[yi].size() != s.x.cols.size())
    throw std::invalid_argument("plan does not cover every first-stage variable of year " +
                                str(d.instance().years[yi]));
  for (size_t i = 0; i < s.x.cols.size(); ++i) {
    const int j = s.x.cols[i];
    s.fix_rows.push_back(s.lp.add_row(RowSense::kEqual, plan.values[yi][i], {{j, 1.0}}, "fix_" + s.lp.col_names[j]));
  }
  s.lp.fixing_rows = s.fix_rows;
  s.ops = add_operations(s.lp, d, yi, wi, s.x, 1.0, o);
  return s;
}

void pin_plan(SubProblem& sp, const std::vector<double>& x_y) {
  if (x_y.size() != sp.fix_rows.size()) throw std::invalid_argument("plan does not match the subproblem layout");
  for (size_t i = 0; i < x_y.size(); ++i) sp.lp.rhs[sp.fix_rows[i]] = x_y[i];
}

// ---- Cuts and plans ---------------------------------------------------------

double Cut::constant() const {
  double c = 0;
  for (const auto& a : years) {
    c += a.z;
    for (size_t i = 0; i < a.lambda.size(); ++i) c -= a.lambda[i] * a.x_hat[i];
  }
  return c;
}

double Cut::evaluate(const std::vector<std::vector<double>>& x) const {
  double v = 0;
  for (size_t yi = 0; yi < years.size(); ++yi) {
    const auto& a = years[yi];
    v += a.z;
    for (size_t i = 0; i < a.lambda.size(); ++i) v += a.lambda[i] * (x.at(yi).at(i) - a.x_hat[i]);
  }
  return v;
}

double InvestmentPlan::value(const std::string& label) const {
  for (size_t y = 0; y < labels.size(); ++y)
    for (size_t i = 0; i < labels[y].size(); ++i)
      if (labels[y][i] == label) return values[y][i];
  throw std::out_of_range("plan has no variable " + label);
}

InvestmentPlan extract_plan(const LpProblem& lp, const std::vector<FirstStageRefs>& x, const Eigen::VectorXd& values,
                            const std::vector<int>& years, std::string provenance) {
  InvestmentPlan plan;
  plan.years = years;
  plan.provenance = std::move(provenance);
  for (const auto& xr : x) {
    std::vector<std::string> labels;
    std::vector<double> vals;
    for (int j : xr.cols) {
      labels.push_back(lp.col_names[j]);
      double v = values[j];
      if (lp.is_integer[j]) v = std::round(v);
      if (v == 0) v = 0;  // drop negative zero
      vals.push_back(v);
    }
    plan.labels.push_back(std::move(labels));
    plan.values.push_back(std::move(vals));
  }
  return plan;
}

namespace {
// First-stage problem alone, for costing and checking plans.
struct FirstStageOnly {
  LpProblem lp;
  std::vector<FirstStageRefs> x;
  Eigen::VectorXd load(const InvestmentPlan& plan) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(lp.num_cols());
    if (plan.values.size() != x.size()) throw std::invalid_argument("plan covers the wrong number of years");
    for (size_t yi = 0; yi < x.size(); ++yi) {
      if (plan.values[yi].size() != x[yi].cols.size()) throw std::invalid_argument("plan does not match the layout");
      for (size_t i = 0; i < x[yi].cols.size(); ++i) v[x[yi].cols[i]] = plan.values[yi][i];
    }
    return v;
  }
};
FirstStageOnly first_stage_only(const ModelData& d) {
  FirstStageOnly f;
  for (int yi = 0; yi < d.num_years(); ++yi) f.x.push_back(add_x_columns(f.lp, d, yi, false));
  add_x_rows(f.lp, d, f.x);
  return f;
}
}  // namespace

double investment_cost(const ModelData& d, const InvestmentPlan& plan) {
  const auto f = first_stage_only(d);
  return f.lp.objective(f.load(plan));
}

std::vector<std::string> check_plan(const ModelData& d, const InvestmentPlan& plan, double tol) {
  std::vector<std::string> out;
  const auto f = first_stage_only(d);
  Eigen::VectorXd v;
  try {
    v = f.load(plan);
  } catch (const std::invalid_argument& e) {
    out.emplace_back(e.what());
    return out;
  }
  for (int j = 0; j < f.lp.num_cols(); ++j) {
    const double s = std::max(1.0, std::abs(v[j]));
    if (v[j] < f.lp.col_lower[j] - tol * s || v[j] > f.lp.col_upper[j] + tol * s)
      out.push_back(f.lp.col_names[j] + " outside its bounds");
    if (f.lp.is_integer[j] && std::abs(v[j] - std::round(v[j])) > tol) out.push_back(f.lp.col_names[j] + " not integral");
  }
  const Eigen::VectorXd act = f.lp.activity(v);
  for (int i = 0; i < f.lp.num_rows(); ++i) {
    const double b = f.lp.rhs[i], s = std::max(1.0, std::abs(b));
    const double a = act[i];
    bool bad = false;
    switch (f.lp.row_sense[i]) {
      case RowSense::kEqual: bad = std::abs(a - b) > tol * s; break;
      case RowSense::kLessEqual: bad = a > b + tol * s; break;
      case RowSense::kGreaterEqual: bad = a < b - tol * s; break;
    }
    if (bad) out.push_back(f.lp.row_names[i] + " violated");
  }
  return out;
}

CatalogCounts catalog_counts(const ModelData& d) {
  const auto& in = d.instance();
  long lc = 0, jc = 0, hc = 0, hp = 0;
  for (const auto& l : in.lines) lc += l.status == AssetStatus::kCandidate;
  for (const auto& j : in.pipelines) jc += j.status == AssetStatus::kCandidate;
  for (const auto& h : in.hydro_plants) {
    hc += h.status == AssetStatus::kCandidate;
    hp += h.programmable;
  }
  const long K = in.thermal_clusters.size(), H = in.hydro_plants.size(), B = in.batteries.size(),
             L = in.lines.size(), Z = in.power_zones.size(), G = in.ptg.size(), N = in.gas_zones.size(),
             J = in.pipelines.size();
  CatalogCounts cc;
  for (int yi = 0; yi < d.num_years(); ++yi) {
    const long C = d.calendar(yi).num_clusters();
    const long xi = d.chain(yi).num_checkpoints;
    cc.first_stage.push_back(2 * (lc + jc + hc) + 3 * K + 4 * Z + 2 * B + 2 * G + kHours * C * Z);
    cc.second_stage.push_back(C * (kHours * (4 * K + H + 2 * hp + 3 * B + L + 3 * Z + G + 4 * N + J) + K) +
                              xi * (hp + N));
  }
  for (int yi = 0; yi < d.num_years(); ++yi) {
    cc.monolithic += cc.first_stage[yi] + d.num_scenarios() * cc.second_stage[yi];
    cc.master += cc.first_stage[yi];
  }
  cc.master += d.num_scenarios();
  return cc;
}

// ---- Evaluation -------------------------------------------------------------

const char* to_string(CostTerm t) {
  switch (t) {
    case CostTerm::kHydro: return "hydro";
    case CostTerm::kStartup: return "startup";
    case CostTerm::kThermal: return "thermal";
    case CostTerm::kBattery: return "battery";
    case CostTerm::kOvergeneration: return "overgeneration";
    case CostTerm::kEnergyNotSupplied: return "energy_not_supplied";
    case CostTerm::kReserveNotSupplied: return "reserve_not_supplied";
    case CostTerm::kGasSupply: return "gas_supply";
    case CostTerm::kPtg: return "ptg";
    case CostTerm::kGasCurtailment: return "gas_curtailment";
  }
  return "?";
}

double CostBreakdown::total() const {
  double s = 0;
  for (double v : terms) s += v;
  return s;
}

CostBreakdown operating_costs(const ModelData& d, const OperationRefs& ops, const Eigen::VectorXd& v,
                              const BuildOptions& o) {
  const auto& in = d.instance();
  const int yi = ops.year;
  const auto& cy = d.calendar(yi);
  const auto& sc = d.scenarios().scenarios[ops.scenario];
  const auto& pen = in.penalties;
  const double disc = o.discount_operations ? d.discount(yi) : 1.0;
  CostBreakdown cb;
  auto add = [&](CostTerm term, double x) { cb.terms[static_cast<int>(term)] += x; };
  for (int c = 0; c < cy.num_clusters(); ++c) {
    const double psi = cy.clusters[c].weight * disc;
    for (int t = 0; t < kHours; ++t) {
      for (size_t h = 0; h < in.hydro_plants.size(); ++h)
        add(CostTerm::kHydro, psi * in.hydro_plants[h].cost * v[ops.h_out(h, c, t)]);
      for (size_t k = 0; k < in.thermal_clusters.size(); ++k) {
        const auto& kc = in.thermal_clusters[k];
        add(CostTerm::kStartup, psi * kc.startup_cost * v[ops.alpha(k, c, t)]);
        add(CostTerm::kThermal,
            psi * marginal_cost(kc, yi, sc) * (kc.p_min * v[ops.gamma(k, c, t + 1)] + v[ops.p(k, c, t)]));
      }
      for (size_t b = 0; b < in.batteries.size(); ++b)
        add(CostTerm::kBattery, psi * in.batteries[b].cost * v[ops.bat_out(b, c, t)]);
      for (size_t z = 0; z < in.power_zones.size(); ++z) {
        add(CostTerm::kOvergeneration, psi * pen.overgeneration * v[ops.og(z, c, t)]);
        add(CostTerm::kEnergyNotSupplied, psi * pen.energy_not_supplied * v[ops.enp(z, c, t)]);
        add(CostTerm::kReserveNotSupplied, psi * pen.reserve_not_supplied * v[ops.rnp(z, c, t)]);
      }
      for (size_t n = 0; n < in.gas_zones.size(); ++n) {
        add(CostTerm::kGasSupply, psi * sc.gas_cost.at(in.gas_zones[n])[yi] * v[ops.g_sup(n, c, t)]);
        add(CostTerm::kGasCurtailment, psi * pen.gas_curtailment * v[ops.g_curt(n, c, t)]);
      }
      for (size_t g = 0; g < in.ptg.size(); ++g) add(CostTerm::kPtg, psi * in.ptg[g].cost * v[ops.g_ptg(g, c, t)]);
    }
  }
  return cb;
}

SlackTotals slack_totals(const ModelData& d, const OperationRefs& ops, const Eigen::VectorXd& v) {
  const auto& in = d.instance();
  const auto& cy = d.calendar(ops.year);
  SlackTotals s;
  for (int c = 0; c < cy.num_clusters(); ++c) {
    const double psi = cy.clusters[c].weight;
    for (int t = 0; t < kHours; ++t) {
      for (size_t z = 0; z < in.power_zones.size(); ++z) {
        s.energy_not_supplied += psi * v[ops.enp(z, c, t)];
        s.overgeneration += psi * v[ops.og(z, c, t)];
        s.reserve_not_supplied += psi * v[ops.rnp(z, c, t)];
      }
      for (size_t n = 0; n < in.gas_zones.size(); ++n) s.gas_curtailment += psi * v[ops.g_curt(n, c, t)];
    }
  }
  return s;
}

double PhysicsReport::max_residual() const {
  return std::max({power_balance, gas_balance, hydro_cycle, gas_cycle, battery_cycle, uc_identity, mut_violation,
                   mdt_violation, co2_excess, res_shortfall, bound_violation});
}

PhysicsReport check_physics(const ModelData& d, const FirstStageRefs& x, const OperationRefs& ops,
                            const Eigen::VectorXd& v) {
  const auto& in = d.instance();
  const int yi = ops.year;
  const auto& cy = d.calendar(yi);
  const int C = cy.num_clusters(), T = kHours;
  const int K = static_cast<int>(in.thermal_clusters.size());
  PhysicsReport rep;
  auto upd = [](double& field, double r) { field = std::max(field, std::abs(r)); };
  auto theta = [&](int col) { return col >= 0 ? v[col] : 1.0; };
  auto nonneg = [&](int col) {
    if (col >= 0) rep.bound_violation = std::max(rep.bound_violation, -v[col]);
  };

  for (int c = 0; c < C; ++c) {
    for (int t = 0; t < T; ++t) {
      for (size_t z = 0; z < in.power_zones.size(); ++z) {
        const std::string& zid = in.power_zones[z].id;
        double lhs = v[x.res(z, c, t)] + v[ops.enp(z, c, t)];
        double rhs = CalendarYear::at(cy.demand_power, zid, c, t) + v[ops.og(z, c, t)];
        for (int k = 0; k < K; ++k)
          if (d.cluster_zone(k) == static_cast<int>(z))
            lhs += in.thermal_clusters[k].p_min * v[ops.gamma(k, c, t + 1)] + v[ops.p(k, c, t)];
        for (size_t h = 0; h < in.hydro_plants.size(); ++h)
          if (in.hydro_plants[h].zone == zid) {
            lhs += v[ops.h_out(h, c, t)];
            rhs += value_at(v, ops.h_in(h, c, t));
          }
        for (size_t b = 0; b < in.batteries.size(); ++b)
          if (in.batteries[b].zone == zid) {
            lhs += v[ops.bat_out(b, c, t)];
            rhs += v[ops.bat_in(b, c, t)];
          }
        for (size_t l = 0; l < in.lines.size(); ++l) {
          if (in.lines[l].to == zid) lhs += v[ops.f_line(l, c, t)];
          if (in.lines[l].from == zid) rhs += v[ops.f_line(l, c, t)];
        }
        for (size_t g = 0; g < in.ptg.size(); ++g)
          if (in.ptg[g].power_zone == zid) rhs += v[ops.g_ptg(g, c, t)] / in.ptg[g].efficiency;
        upd(rep.power_balance, lhs - rhs);
        nonneg(ops.enp(z, c, t));
        nonneg(ops.og(z, c, t));
        nonneg(ops.rnp(z, c, t));
      }
      for (size_t n = 0; n < in.gas_zones.size(); ++n) {
        const std::string& nid = in.gas_zones[n];
        double lhs = v[ops.g_sup(n, c, t)] + v[ops.g_out(n, c, t)] + v[ops.g_curt(n, c, t)];
        double rhs = CalendarYear::at(cy.demand_gas, nid, c, t) + v[ops.g_in(n, c, t)];
        for (size_t g = 0; g < in.ptg.size(); ++g)
          if (in.ptg[g].gas_zone == nid) lhs += v[ops.g_ptg(g, c, t)];
        for (size_t j = 0; j < in.pipelines.size(); ++j) {
          if (in.pipelines[j].to == nid) lhs += v[ops.f_pipe(j, c, t)];
          if (in.pipelines[j].from == nid) rhs += v[ops.f_pipe(j, c, t)];
        }
        for (int k = 0; k < K; ++k)
          if (d.cluster_gas_zone(k) == static_cast<int>(n)) {
            const auto& kc = in.thermal_clusters[k];
            rhs += kc.heat_rate * (kc.p_min * v[ops.gamma(k, c, t + 1)] + v[ops.p(k, c, t)]);
          }
        upd(rep.gas_balance, lhs - rhs);
        nonneg(ops.g_curt(n, c, t));
      }
    }

    for (int k = 0; k < K; ++k) {
      const auto& kc = in.thermal_clusters[k];
      const double n_units = v[x.n_units[k]];
      for (int t = 0; t <= T; ++t) {
        const double g = v[ops.gamma(k, c, t)];
        rep.uc_integrality = std::max(rep.uc_integrality, std::abs(g - std::round(g)));
        rep.bound_violation = std::max({rep.bound_violation, -g, g - n_units});
        if (t == 0) continue;
        for (int col : {ops.alpha(k, c, t - 1), ops.beta(k, c, t - 1)}) {
          rep.uc_integrality = std::max(rep.uc_integrality, std::abs(v[col] - std::round(v[col])));
          nonneg(col);
        }
        upd(rep.uc_identity, g - v[ops.gamma(k, c, t - 1)] - v[ops.alpha(k, c, t - 1)] + v[ops.beta(k, c, t - 1)]);
        if (t >= kc.mut) {
          double s = 0;
          for (int tau = t - kc.mut; tau < t; ++tau) s += v[ops.alpha(k, c, tau)];
          rep.mut_violation = std::max(rep.mut_violation, s - g);
        }
        if (t >= kc.mdt) {
          double s = 0;
          for (int tau = t - kc.mdt; tau < t; ++tau) s += v[ops.beta(k, c, tau)];
          rep.mdt_violation = std::max(rep.mdt_violation, s - (n_units - g));
        }
      }
    }

    for (size_t b = 0; b < in.batteries.size(); ++b) {
      const auto& bt = in.batteries[b];
      double prev = bt.initial_level;
      for (int t = 0; t < T; ++t) {
        const double lvl = v[ops.bat(b, c, t)];
        upd(rep.battery_cycle, lvl - ((1 - bt.self_discharge) * prev + bt.eff_in * v[ops.bat_in(b, c, t)] -
                                      bt.eff_out * v[ops.bat_out(b, c, t)]));
        rep.bound_violation = std::max(rep.bound_violation, lvl - bt.epr * v[x.bat_avail[b]]);
        prev = lvl;
      }
      upd(rep.battery_cycle, prev - bt.initial_level);
    }
  }

  const auto& chain = d.chain(yi);
  for (size_t h = 0; h < in.hydro_plants.size(); ++h) {
    const auto& hp = in.hydro_plants[h];
    if (!hp.programmable) continue;
    const double th = theta(x.theta_hydro[h]);
    double level = hp.level0;
    for (const auto& seg : chain.segments) {
      double net = 0;
      for (int c = 0; c < C; ++c)
        for (int t = 0; t < T; ++t)
          net += seg.cluster_days[c] * (CalendarYear::at(cy.inflow, hp.id, c, t) * th +
                                        hp.eff_in * v[ops.h_in(h, c, t)] - hp.eff_out * v[ops.h_out(h, c, t)] -
                                        v[ops.h_spill(h, c, t)]);
      if (seg.checkpoint == 0) {
        upd(rep.hydro_cycle, level + net - hp.level0);
      } else {
        const double lt = v[ops.h_lt[h][seg.checkpoint - 1]];
        upd(rep.hydro_cycle, lt - (level + net));
        level = lt;
      }
    }
  }
  for (size_t n = 0; n < in.gas_zones.size(); ++n) {
    const auto* gd = in.gas_data(in.gas_zones[n]);
    const double level0 = gd ? gd->level0 : 0, ein = gd ? gd->eff_in : 1, eout = gd ? gd->eff_out : 1;
    double level = level0;
    for (const auto& seg : chain.segments) {
      double net = 0;
      for (int c = 0; c < C; ++c)
        for (int t = 0; t < T; ++t)
          net += seg.cluster_days[c] * (ein * v[ops.g_in(n, c, t)] - eout * v[ops.g_out(n, c, t)]);
      if (seg.checkpoint == 0) {
        upd(rep.gas_cycle, level + net - level0);
      } else {
        const double lt = v[ops.g_lt[n][seg.checkpoint - 1]];
        upd(rep.gas_cycle, lt - (level + net));
        level = lt;
      }
    }
  }

  for (size_t a = 0; a < in.areas.size(); ++a) {
    auto it = in.policy.find(in.areas[a].id);
    if (it == in.policy.end()) continue;
    double emissions = 0;
    for (int k = 0; k < K; ++k) {
      if (d.area_of_zone(d.cluster_zone(k)) != static_cast<int>(a)) continue;
      const auto& kc = in.thermal_clusters[k];
      for (int c = 0; c < C; ++c)
        for (int t = 0; t < T; ++t)
          emissions += cy.clusters[c].weight * kc.co2_rate * (kc.p_min * v[ops.gamma(k, c, t + 1)] + v[ops.p(k, c, t)]);
    }
    if (std::isfinite(it->second.co2_cap[yi]))
      rep.co2_excess = std::max(rep.co2_excess, emissions - it->second.co2_cap[yi]);
    double res = 0, demand = 0;
    for (const auto& zid : in.areas[a].zones) {
      const int z = in.zone_index(zid);
      for (int c = 0; c < C; ++c)
        for (int t = 0; t < T; ++t) {
          res += cy.clusters[c].weight * v[x.res(z, c, t)];
          demand += cy.clusters[c].weight * CalendarYear::at(cy.demand_power, zid, c, t);
        }
    }
    if (demand > 0) rep.res_shortfall = std::max(rep.res_shortfall, it->second.res_share[yi] - res / demand);
  }
  return rep;
}

Eigen::VectorXd commitment_hint(const ModelData& d, const FirstStageRefs& x, const OperationRefs& ops,
                                Eigen::VectorXd v) {
  const auto& in = d.instance();
  const int C = d.calendar(ops.year).num_clusters(), T = kHours;
  for (size_t k = 0; k < in.thermal_clusters.size(); ++k) {
    const auto& kc = in.thermal_clusters[k];
    const double n = std::round(v[x.n_units[k]]);
    for (int c = 0; c < C; ++c) {
      std::vector<double> g(T + 1), a(T, 0), b(T, 0);
      // Enough units to carry the relaxed dispatch, never fewer than the nearest integer.
      for (int t = 0; t <= T; ++t) {
        const double on = v[ops.gamma(k, c, t)];
        double units = std::round(on);
        if (t > 0 && kc.p_max > 0) {
          const double out = kc.p_min * on + v[ops.p(k, c, t - 1)];
          units = std::max(units, std::ceil(out / kc.p_max - 1e-6));
        }
        g[t] = std::clamp(units, 0.0, n);
      }
      for (int t = 1; t <= T; ++t) {
        // Windows are truncated at the day start, which is stricter than the rows.
        double up = 0, down = 0;
        for (int tau = std::max(0, t - kc.mut); tau <= t - 2; ++tau) up += a[tau];
        for (int tau = std::max(0, t - kc.mdt); tau <= t - 2; ++tau) down += b[tau];
        g[t] = std::max(std::min(g[t], n - down), up);
        a[t - 1] = std::max(0.0, g[t] - g[t - 1]);
        b[t - 1] = std::max(0.0, g[t - 1] - g[t]);
      }
      for (int t = 0; t <= T; ++t) v[ops.gamma(k, c, t)] = g[t];
      for (int t = 0; t < T; ++t) {
        v[ops.alpha(k, c, t)] = a[t];
        v[ops.beta(k, c, t)] = b[t];
      }
    }
  }
  return v;
}

}  // namespace gtep
