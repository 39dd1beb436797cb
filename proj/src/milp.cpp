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

#include "gtep/milp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <tuple>

#include "gtep/simplex.hpp"

namespace gtep {
namespace {

struct BoundChange {
  int col;
  double lo, hi;
};

struct Node {
  std::vector<BoundChange> changes;  // cumulative from the root
  std::shared_ptr<const Basis> basis;
  double bound;
  int depth;
};

double gap_of(double obj, double bound) { return (obj - bound) / std::max(std::abs(obj), 1.0); }

class BranchAndBound {
 public:
  BranchAndBound(const LpProblem& p, const SolverOptions& o) : work_(p), opts_(o) {
    for (int j = 0; j < p.num_cols(); ++j)
      if (p.is_integer[j]) ints_.push_back(j);
    root_lo_ = p.col_lower;
    root_hi_ = p.col_upper;
  }

  MilpSolution run(const Eigen::VectorXd* hint);

 private:
  void apply(const std::vector<BoundChange>& ch) {
    work_.col_lower = root_lo_;
    work_.col_upper = root_hi_;
    for (const auto& c : ch) {
      work_.col_lower[c.col] = c.lo;
      work_.col_upper[c.col] = c.hi;
    }
  }
  LpSolution lp(const Basis* warm) {
    auto s = solve_lp(work_, opts_, warm);
    result_.lp_iterations += s.iterations;
    return s;
  }
  int most_fractional(const Eigen::VectorXd& x) const {
    int best = -1;
    double score = opts_.int_tol;
    for (int j : ints_) {
      const double f = x[j] - std::floor(x[j]);
      const double s = std::min(f, 1 - f);
      if (s > score) {
        score = s;
        best = j;
      }
    }
    return best;
  }
  void offer(const Eigen::VectorXd& x, double obj) {
    if (obj < incumbent_obj_ - 1e-12 * std::max(1.0, std::abs(obj))) {
      incumbent_obj_ = obj;
      incumbent_ = x;
      for (int j : ints_) incumbent_[j] = std::round(incumbent_[j]);
    }
  }
  // Fixes the integer columns at rounded `x` and solves for the rest.
  void try_rounding(const Eigen::VectorXd& x, const std::vector<BoundChange>& ch, const Basis* warm) {
    apply(ch);
    for (int j : ints_) {
      const double v = std::clamp(std::round(x[j]), work_.col_lower[j], work_.col_upper[j]);
      work_.col_lower[j] = work_.col_upper[j] = v;
    }
    const auto s = lp(warm);
    if (s.optimal()) offer(s.primal, s.objective);
  }
  double prune_tol(double inc) const { return opts_.mip_gap * std::max(std::abs(inc), 1.0); }

  LpProblem work_;
  SolverOptions opts_;
  std::vector<int> ints_;
  std::vector<double> root_lo_, root_hi_;
  MilpSolution result_;
  Eigen::VectorXd incumbent_;
  double incumbent_obj_ = kInf<double>;
};

MilpSolution BranchAndBound::run(const Eigen::VectorXd* hint) {
  if (hint && hint->size() == work_.num_cols()) try_rounding(*hint, {}, nullptr);

  std::vector<Node> pool;
  std::vector<int> free_slots;
  // (bound, -depth, id) for best-first; (-depth, id) for plunging.
  std::set<std::tuple<double, int, int>> by_bound;
  std::set<std::pair<int, int>> by_depth;
  auto push = [&](Node n) {
    int id;
    if (!free_slots.empty()) {
      id = free_slots.back();
      free_slots.pop_back();
      pool[id] = std::move(n);
    } else {
      id = static_cast<int>(pool.size());
      pool.push_back(std::move(n));
    }
    by_bound.emplace(pool[id].bound, -pool[id].depth, id);
    by_depth.emplace(-pool[id].depth, id);
  };
  auto pop = [&](int id) {
    by_bound.erase({pool[id].bound, -pool[id].depth, id});
    by_depth.erase({-pool[id].depth, id});
    Node n = std::move(pool[id]);
    free_slots.push_back(id);
    return n;
  };

  push(Node{{}, nullptr, -kInf<double>, 0});
  double pruned_min = kInf<double>;
  bool failed = false;

  while (!by_bound.empty()) {
    const double best_open = std::get<0>(*by_bound.begin());
    if (std::isfinite(incumbent_obj_) && best_open >= incumbent_obj_ - prune_tol(incumbent_obj_)) {
      pruned_min = std::min(pruned_min, best_open);
      break;
    }
    if (result_.nodes >= opts_.node_limit) {
      result_.status = MilpStatus::kNodeLimit;
      result_.bound = std::min(best_open, incumbent_obj_);
      break;
    }
    const int id = std::isfinite(incumbent_obj_) ? std::get<2>(*by_bound.begin()) : by_depth.begin()->second;
    Node node = pop(id);

    // Plunge loop: keep following the preferred child until it is pruned.
    for (;;) {
      ++result_.nodes;
      apply(node.changes);
      const auto s = lp(node.basis.get());
      if (s.status == LpStatus::kInfeasible) break;
      if (s.status == LpStatus::kUnbounded) {
        if (node.depth == 0 || !std::isfinite(incumbent_obj_)) {
          result_.status = MilpStatus::kUnbounded;
          return result_;
        }
        break;
      }
      if (!s.optimal()) {
        failed = true;
        break;
      }
      if (std::isfinite(incumbent_obj_) && s.objective >= incumbent_obj_ - prune_tol(incumbent_obj_)) {
        pruned_min = std::min(pruned_min, s.objective);
        break;
      }
      const int j = most_fractional(s.primal);
      if (j < 0) {
        offer(s.primal, s.objective);
        break;
      }
      if (node.depth == 0 || result_.nodes % 10 == 0) try_rounding(s.primal, node.changes, &s.basis);
      apply(node.changes);

      const double v = s.primal[j];
      auto basis = std::make_shared<const Basis>(s.basis);
      auto child = [&](bool up) {
        Node c{node.changes, basis, s.objective, node.depth + 1};
        double lo = work_.col_lower[j], hi = work_.col_upper[j];
        if (up) lo = std::ceil(v);
        else hi = std::floor(v);
        bool found = false;
        for (auto& ch : c.changes)
          if (ch.col == j) {
            ch.lo = lo;
            ch.hi = hi;
            found = true;
          }
        if (!found) c.changes.push_back({j, lo, hi});
        return c;
      };
      const bool up_first = v - std::floor(v) >= 0.5;
      Node first = child(up_first);
      Node second = child(!up_first);
      push(std::move(second));
      node = std::move(first);
    }
  }

  if (result_.status != MilpStatus::kNodeLimit) {
    if (failed && !std::isfinite(incumbent_obj_)) {
      result_.status = MilpStatus::kNumericalFailure;
      return result_;
    }
    result_.status = std::isfinite(incumbent_obj_) ? MilpStatus::kOptimal : MilpStatus::kInfeasible;
    if (failed) result_.status = MilpStatus::kNumericalFailure;
    result_.bound = std::min(pruned_min, incumbent_obj_);
  }
  if (std::isfinite(incumbent_obj_)) {
    result_.values = incumbent_;
    work_.col_lower = root_lo_;
    work_.col_upper = root_hi_;
    result_.objective = work_.objective(incumbent_);
    result_.gap = std::max(0.0, gap_of(result_.objective, result_.bound));
  }
  return result_;
}

}  // namespace

MilpSolution solve_milp(const LpProblem& p, const SolverOptions& opts, const Eigen::VectorXd* hint) {
  p.check();
  BranchAndBound bb(p, opts);
  return bb.run(hint);
}

MilpSolution enumerate_oracle(const LpProblem& p, const SolverOptions& opts) {
  p.check();
  std::vector<int> ints;
  for (int j = 0; j < p.num_cols(); ++j)
    if (p.is_integer[j]) ints.push_back(j);
  if (ints.size() > 20) throw EnumerationSizeError("more than 20 integer columns");
  std::vector<int> lo(ints.size()), range(ints.size());
  double space = 1;
  for (size_t k = 0; k < ints.size(); ++k) {
    const double l = std::ceil(p.col_lower[ints[k]] - opts.int_tol);
    const double h = std::floor(p.col_upper[ints[k]] + opts.int_tol);
    if (!std::isfinite(l) || !std::isfinite(h) || h - l > 4)
      throw EnumerationSizeError("integer column " + std::to_string(ints[k]) + " has range wider than 4");
    lo[k] = static_cast<int>(l);
    range[k] = std::max(0, static_cast<int>(h - l) + 1);
    space *= range[k];
  }
  if (space > double(1 << 20)) throw EnumerationSizeError("enumeration space exceeds 2^20");

  MilpSolution out;
  out.status = MilpStatus::kInfeasible;
  if (space == 0) return out;
  LpProblem work = p;
  std::vector<int> digit(ints.size(), 0);
  for (;;) {
    for (size_t k = 0; k < ints.size(); ++k) work.col_lower[ints[k]] = work.col_upper[ints[k]] = lo[k] + digit[k];
    const auto s = solve_lp(work, opts);
    ++out.nodes;
    out.lp_iterations += s.iterations;
    if (s.status == LpStatus::kUnbounded) {
      out.status = MilpStatus::kUnbounded;
      out.values.resize(0);
      return out;
    }
    if (s.optimal() && s.objective < out.objective) {
      out.objective = s.objective;
      out.values = s.primal;
      out.status = MilpStatus::kOptimal;
    }
    size_t k = 0;
    while (k < ints.size() && ++digit[k] == range[k]) digit[k++] = 0;
    if (k == ints.size()) break;
  }
  if (out.optimal()) {
    out.bound = out.objective;
    out.gap = 0;
  }
  return out;
}

}  // namespace gtep
