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

#include "gtep/mps.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gtep {
namespace {

std::string num12(double v) {
  char buf[64];
  for (int prec = 12; prec > 0; --prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::string(buf).size() <= 12) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string gen(char prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%07d", prefix, i + 1);
  return buf;
}

// Fixed-format card: fields start at columns 2, 5, 15, 25, 40, 50.
std::string card(const std::string& f1, const std::string& f2, const std::string& f3 = {},
                 const std::string& f4 = {}, const std::string& f5 = {}, const std::string& f6 = {}) {
  char buf[128];
  std::snprintf(buf, sizeof buf, " %-2s %-8s  %-8s  %12s   %-8s  %12s", f1.c_str(), f2.c_str(), f3.c_str(),
                f4.c_str(), f5.c_str(), f6.c_str());
  std::string s(buf);
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

void write_mps(const LpProblem& p, std::ostream& out, const std::string& name) {
  const int n = p.num_cols();
  const int m = p.num_rows();
  for (int j = 0; j < n; ++j)
    if (j < static_cast<int>(p.col_names.size()) && !p.col_names[j].empty())
      out << "* " << gen('C', j) << " " << p.col_names[j] << "\n";
  for (int i = 0; i < m; ++i)
    if (i < static_cast<int>(p.row_names.size()) && !p.row_names[i].empty())
      out << "* " << gen('R', i) << " " << p.row_names[i] << "\n";
  out << "NAME          " << name << "\n";
  out << "ROWS\n" << card("N", "COST") << "\n";
  for (int i = 0; i < m; ++i) {
    const char* s = p.row_sense[i] == RowSense::kLessEqual ? "L" : p.row_sense[i] == RowSense::kEqual ? "E" : "G";
    out << card(s, gen('R', i)) << "\n";
  }
  out << "COLUMNS\n";
  const auto a = p.matrix();
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    if (static_cast<bool>(p.is_integer[j]) != in_int) {
      out << card("", gen('M', marker++), "'MARKER'", "", in_int ? "'INTEND'" : "'INTORG'") << "\n";
      in_int = !in_int;
    }
    const std::string c = gen('C', j);
    if (p.cost[j] != 0) out << card("", c, "COST", num12(p.cost[j])) << "\n";
    for (decltype(a)::InnerIterator it(a, j); it; ++it)
      out << card("", c, gen('R', it.row()), num12(it.value())) << "\n";
    if (p.cost[j] == 0 && a.col(j).nonZeros() == 0) out << card("", c, "COST", "0") << "\n";
  }
  if (in_int) out << card("", gen('M', marker), "'MARKER'", "", "'INTEND'") << "\n";
  out << "RHS\n";
  if (p.objective_offset != 0) out << card("", "RHS", "COST", num12(-p.objective_offset)) << "\n";
  for (int i = 0; i < m; ++i)
    if (p.rhs[i] != 0) out << card("", "RHS", gen('R', i), num12(p.rhs[i])) << "\n";
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const std::string c = gen('C', j);
    const double lo = p.col_lower[j], hi = p.col_upper[j];
    if (lo == hi) {
      out << card("FX", "BND", c, num12(lo)) << "\n";
      continue;
    }
    if (std::isinf(lo) && std::isinf(hi)) {
      out << card("FR", "BND", c) << "\n";
      continue;
    }
    if (std::isinf(lo)) out << card("MI", "BND", c) << "\n";
    else if (lo != 0 || p.is_integer[j]) out << card("LO", "BND", c, num12(lo)) << "\n";
    if (std::isfinite(hi)) out << card("UP", "BND", c, num12(hi)) << "\n";
    else if (p.is_integer[j]) out << card("PL", "BND", c) << "\n";
  }
  out << "ENDATA\n";
}

LpProblem read_mps(std::istream& in) {
  LpProblem p;
  std::map<std::string, int> rows, cols;
  std::string obj_row;
  std::string section, line;
  bool in_int = false;
  auto fail = [](const std::string& why) { throw std::runtime_error("mps: " + why); };
  auto col_of = [&](const std::string& name) {
    auto it = cols.find(name);
    if (it != cols.end()) return it->second;
    const int j = p.add_column(0, 0, kInf<double>, in_int, name);
    cols[name] = j;
    return j;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ss(line);
    std::vector<std::string> f;
    for (std::string t; ss >> t;) f.push_back(t);
    if (f.empty()) continue;
    if (line[0] != ' ' && line[0] != '\t') {
      section = f[0];
      if (section == "ENDATA") break;
      continue;
    }
    if (section == "ROWS") {
      if (f.size() < 2) fail("short ROWS card");
      if (f[0] == "N") {
        if (obj_row.empty()) obj_row = f[1];
        continue;
      }
      const RowSense s = f[0] == "L" ? RowSense::kLessEqual : f[0] == "E" ? RowSense::kEqual
                         : f[0] == "G" ? RowSense::kGreaterEqual
                                       : (fail("bad row type " + f[0]), RowSense::kEqual);
      rows[f[1]] = p.add_row(s, 0, std::span<const std::pair<int, double>>{}, f[1]);
    } else if (section == "COLUMNS") {
      if (f.size() >= 3 && f[1] == "'MARKER'") {
        in_int = f.back() == "'INTORG'";
        continue;
      }
      if (f.size() < 3 || f.size() % 2 == 0) fail("bad COLUMNS card");
      const int j = col_of(f[0]);
      for (size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = std::stod(f[k + 1]);
        if (f[k] == obj_row) {
          p.cost[j] = v;
        } else {
          auto it = rows.find(f[k]);
          if (it == rows.end()) fail("unknown row " + f[k]);
          if (v != 0) p.entries.emplace_back(it->second, j, v);
        }
      }
      if (p.is_integer[j]) p.col_upper[j] = kInf<double>;
    } else if (section == "RHS") {
      if (f.size() < 3 || f.size() % 2 == 0) fail("bad RHS card");
      for (size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = std::stod(f[k + 1]);
        if (f[k] == obj_row) {
          p.objective_offset = -v;
          continue;
        }
        auto it = rows.find(f[k]);
        if (it == rows.end()) fail("unknown row " + f[k]);
        p.rhs[it->second] = v;
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) fail("short BOUNDS card");
      auto it = cols.find(f[2]);
      if (it == cols.end()) fail("unknown column " + f[2]);
      const int j = it->second;
      const double v = f.size() > 3 ? std::stod(f[3]) : 0.0;
      const std::string& t = f[0];
      if (t == "LO") p.col_lower[j] = v;
      else if (t == "UP") p.col_upper[j] = v;
      else if (t == "FX") p.col_lower[j] = p.col_upper[j] = v;
      else if (t == "FR") p.col_lower[j] = -kInf<double>, p.col_upper[j] = kInf<double>;
      else if (t == "MI") p.col_lower[j] = -kInf<double>;
      else if (t == "PL") p.col_upper[j] = kInf<double>;
      else if (t == "BV") p.col_lower[j] = 0, p.col_upper[j] = 1, p.is_integer[j] = 1;
      else fail("unsupported bound type " + t);
    } else {
      fail("unsupported section " + section);
    }
  }
  return p;
}

}  // namespace gtep
