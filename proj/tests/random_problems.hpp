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

// Random LP/MILP generators and a brute-force vertex oracle shared by the
// kernel tests and the acceptance run.

#ifndef GTEP_TESTS_RANDOM_PROBLEMS_HPP
#define GTEP_TESTS_RANDOM_PROBLEMS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gtep/lp.hpp"

namespace gtep::testing {

// Brute-force vertex enumeration for a box-bounded LP: every choice of n
// active constraints among rows and bounds is solved and checked.
inline std::optional<double> vertex_oracle(const LpProblem& p) {
  const int n = p.num_cols();
  const int m = p.num_rows();
  Eigen::MatrixXd a = Eigen::MatrixXd(p.matrix());
  std::vector<Eigen::VectorXd> hrow;
  std::vector<double> hb;
  for (int i = 0; i < m; ++i) {
    hrow.push_back(a.row(i).transpose());
    hb.push_back(p.rhs[i]);
  }
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1;
    hrow.push_back(e);
    hb.push_back(p.col_lower[j]);
    hrow.push_back(e);
    hb.push_back(p.col_upper[j]);
  }
  const int k = static_cast<int>(hrow.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd mat(n, n);
      Eigen::VectorXd rhs(n);
      for (int r = 0; r < n; ++r) {
        mat.row(r) = hrow[pick[r]].transpose();
        rhs[r] = hb[pick[r]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(mat);
      if (lu.rank() < n) return;
      Eigen::VectorXd x = lu.solve(rhs);
      for (int j = 0; j < n; ++j)
        if (x[j] < p.col_lower[j] - 1e-8 || x[j] > p.col_upper[j] + 1e-8) return;
      Eigen::VectorXd act = a * x;
      for (int i = 0; i < m; ++i) {
        const double t = 1e-8 * (1 + std::abs(p.rhs[i]));
        if (p.row_sense[i] == RowSense::kLessEqual && act[i] > p.rhs[i] + t) return;
        if (p.row_sense[i] == RowSense::kGreaterEqual && act[i] < p.rhs[i] - t) return;
        if (p.row_sense[i] == RowSense::kEqual && std::abs(act[i] - p.rhs[i]) > t) return;
      }
      const double obj = p.objective(x);
      if (!best || obj < *best) best = obj;
      return;
    }
    for (int c = start; c < k; ++c) {
      pick[depth] = c;
      rec(c + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

inline LpProblem random_lp(std::mt19937& rng, int n, int m) {
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<int> sense(0, 2);
  std::bernoulli_distribution sparse(0.3);
  LpProblem p;
  for (int j = 0; j < n; ++j) {
    const double lo = std::round(u(rng));
    p.add_column(std::round(u(rng) * 10) / 10, lo, lo + 1 + std::abs(std::round(u(rng))));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j)
      if (!sparse(rng)) terms.emplace_back(j, std::round(u(rng) * 10) / 10);
    const int s = sense(rng);
    p.add_row(s == 0 ? RowSense::kLessEqual : s == 1 ? RowSense::kGreaterEqual : RowSense::kEqual,
              std::round(u(rng) * 4) / 2, terms);
  }
  return p;
}

inline LpProblem random_milp(std::mt19937& rng, int nbin, int ncont, int m) {
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<int> sense(0, 2);
  std::bernoulli_distribution sparse(0.4);
  LpProblem p;
  for (int j = 0; j < nbin; ++j) p.add_column(std::round(u(rng) * 10) / 10, 0, 1, true);
  for (int j = 0; j < ncont; ++j) p.add_column(std::round(u(rng) * 10) / 10, -2, 3);
  const int n = nbin + ncont;
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < n; ++j)
      if (!sparse(rng)) t.emplace_back(j, std::round(u(rng) * 10) / 10);
    const int s = sense(rng);
    p.add_row(s == 0 ? RowSense::kLessEqual : s == 1 ? RowSense::kGreaterEqual : RowSense::kEqual,
              std::round(u(rng) * 4) / 2, t);
  }
  return p;
}

}  // namespace gtep::testing

#endif  // GTEP_TESTS_RANDOM_PROBLEMS_HPP
