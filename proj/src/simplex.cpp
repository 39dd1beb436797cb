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

#include "gtep/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

namespace gtep {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kInfeasible: return "infeasible";
    case MilpStatus::kUnbounded: return "unbounded";
    case MilpStatus::kNodeLimit: return "node_limit";
    case MilpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

template <typename Scalar>
void BasicLpProblem<Scalar>::check() const {
  const int n = num_cols();
  const int m = num_rows();
  if (col_lower.size() != cost.size() || col_upper.size() != cost.size() ||
      is_integer.size() != cost.size())
    throw std::invalid_argument("column arrays have inconsistent sizes");
  if (row_sense.size() != rhs.size()) throw std::invalid_argument("row arrays have inconsistent sizes");
  for (int j = 0; j < n; ++j) {
    if (std::isnan(col_lower[j]) || std::isnan(col_upper[j]) || col_lower[j] > col_upper[j])
      throw std::invalid_argument("column " + std::to_string(j) + " has invalid bounds");
    if (!std::isfinite(cost[j])) throw std::invalid_argument("column " + std::to_string(j) + " has non-finite cost");
  }
  for (int i = 0; i < m; ++i)
    if (!std::isfinite(rhs[i])) throw std::invalid_argument("row " + std::to_string(i) + " has non-finite rhs");
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= m || t.col() < 0 || t.col() >= n)
      throw std::invalid_argument("matrix entry index out of range");
    if (!std::isfinite(t.value())) throw std::invalid_argument("matrix entry is not finite");
  }
  for (int r : fixing_rows)
    if (r < 0 || r >= m) throw std::invalid_argument("fixing row index out of range");
}

template <typename Scalar>
Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int> BasicLpProblem<Scalar>::matrix() const {
  Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int> a(num_rows(), num_cols());
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  return a;
}

template <typename Scalar>
typename BasicLpProblem<Scalar>::Vector BasicLpProblem<Scalar>::activity(const Vector& x) const {
  Vector act = Vector::Zero(num_rows());
  for (const auto& t : entries) act[t.row()] += t.value() * x[t.col()];
  return act;
}

template <typename Scalar>
Scalar BasicLpProblem<Scalar>::objective(const Vector& x) const {
  Scalar obj = objective_offset;
  for (int j = 0; j < num_cols(); ++j) obj += cost[j] * x[j];
  return obj;
}

namespace {

template <typename Scalar>
Scalar pow2_round(Scalar v) {
  using std::exp2;
  using std::log2;
  using std::round;
  return exp2(round(log2(v)));
}

template <typename Scalar>
class RevisedSimplex {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SpMat = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;
  using Lu = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

  RevisedSimplex(const BasicLpProblem<Scalar>& p, const SolverOptions& o) : p_(p), opts_(o) {}

  BasicLpSolution<Scalar> solve(const Basis* warm);

 private:
  enum class Outcome { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kStalled, kNumerical };

  struct Eta {
    int row;
    Scalar pivot;
    std::vector<int> idx;
    std::vector<Scalar> val;
  };

  void setup();
  void slack_basis();
  bool load_basis(const Basis& b);
  void place_nonbasic(int j);
  bool refactor();
  void ftran(Vector& v) const;
  void btran(Vector& v) const;
  void add_eta(const Vector& col, int r);
  Vector column(int j) const;
  void compute_primal();
  void compute_duals(Vector& y, Vector& d) const;
  bool primal_feasible() const;
  bool dual_feasible(const Vector& d) const;
  bool make_dual_feasible();
  Outcome primal();
  Outcome dual();
  bool is_nonbasic_movable(int j) const { return status_[j] != VarStatus::kBasic && lo_[j] < hi_[j]; }
  BasicLpSolution<Scalar> finish(LpStatus st);

  const BasicLpProblem<Scalar>& p_;
  SolverOptions opts_;
  int m_ = 0, n_ = 0, nt_ = 0;
  SpMat a_;
  Vector col_scale_, row_scale_;
  Scalar cost_scale_ = 1;
  Vector lo_, hi_, c_;
  Vector x_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::unique_ptr<Lu> lu_;
  std::vector<Eta> etas_;
  Vector d_;
  Scalar ptol_ = 0;
  Vector dtol_;  // per variable, in scaled units
  std::int64_t iters_ = 0;
};

template <typename Scalar>
void RevisedSimplex<Scalar>::setup() {
  using std::abs;
  using std::sqrt;
  m_ = p_.num_rows();
  n_ = p_.num_cols();
  nt_ = n_ + m_;
  a_ = p_.matrix();
  col_scale_ = Vector::Ones(n_);
  row_scale_ = Vector::Ones(m_);

  if (opts_.scale && a_.nonZeros() > 0) {
    // Entries this far below the largest |a_ij| are round-off; they must not pull the geometric means.
    Scalar amax = 0;
    for (int j = 0; j < n_; ++j)
      for (typename SpMat::InnerIterator it(a_, j); it; ++it) amax = std::max(amax, abs(it.value()));
    const Scalar negligible = amax * Scalar(1e-12);
    for (int pass = 0; pass < 4; ++pass) {
      Vector rmin = Vector::Constant(m_, kInf<Scalar>), rmax = Vector::Zero(m_);
      for (int j = 0; j < n_; ++j)
        for (typename SpMat::InnerIterator it(a_, j); it; ++it) {
          if (abs(it.value()) <= negligible) continue;
          const Scalar v = abs(it.value()) * row_scale_[it.row()] * col_scale_[j];
          rmin[it.row()] = std::min(rmin[it.row()], v);
          rmax[it.row()] = std::max(rmax[it.row()], v);
        }
      for (int i = 0; i < m_; ++i)
        if (rmax[i] > 0) row_scale_[i] /= sqrt(rmin[i] * rmax[i]);
      for (int j = 0; j < n_; ++j) {
        Scalar cmin = kInf<Scalar>, cmax = 0;
        for (typename SpMat::InnerIterator it(a_, j); it; ++it) {
          if (abs(it.value()) <= negligible) continue;
          const Scalar v = abs(it.value()) * row_scale_[it.row()] * col_scale_[j];
          cmin = std::min(cmin, v);
          cmax = std::max(cmax, v);
        }
        if (cmax > 0) col_scale_[j] /= sqrt(cmin * cmax);
      }
    }
    for (int i = 0; i < m_; ++i) row_scale_[i] = pow2_round(row_scale_[i]);
    for (int j = 0; j < n_; ++j) col_scale_[j] = pow2_round(col_scale_[j]);
    for (int j = 0; j < n_; ++j)
      for (typename SpMat::InnerIterator it(a_, j); it; ++it)
        it.valueRef() *= row_scale_[it.row()] * col_scale_[j];
  }

  lo_.resize(nt_);
  hi_.resize(nt_);
  c_ = Vector::Zero(nt_);
  Scalar cmax = 0;
  for (int j = 0; j < n_; ++j) {
    lo_[j] = p_.col_lower[j] / col_scale_[j];
    hi_[j] = p_.col_upper[j] / col_scale_[j];
    c_[j] = p_.cost[j] * col_scale_[j];
    cmax = std::max(cmax, abs(c_[j]));
  }
  cost_scale_ = cmax > 0 ? pow2_round(cmax) : Scalar(1);
  c_ /= cost_scale_;
  for (int i = 0; i < m_; ++i) {
    const Scalar b = p_.rhs[i] * row_scale_[i];
    switch (p_.row_sense[i]) {
      case RowSense::kLessEqual: lo_[n_ + i] = -kInf<Scalar>; hi_[n_ + i] = b; break;
      case RowSense::kGreaterEqual: lo_[n_ + i] = b; hi_[n_ + i] = kInf<Scalar>; break;
      case RowSense::kEqual: lo_[n_ + i] = b; hi_[n_ + i] = b; break;
    }
  }
  x_ = Vector::Zero(nt_);
  status_.assign(nt_, VarStatus::kAtLower);
  head_.assign(m_, -1);
  ptol_ = static_cast<Scalar>(opts_.feas_tol);
  // The reduced-cost tolerance holds both in scaled units and, relative to
  // the largest original cost, after unscaling; badly scaled rows (Benders
  // cuts) otherwise hide large unscaled dual infeasibilities.
  Scalar corig = 0;
  for (int j = 0; j < n_; ++j) corig = std::max(corig, abs(p_.cost[j]));
  const Scalar otol = static_cast<Scalar>(opts_.opt_tol);
  dtol_.resize(nt_);
  for (int j = 0; j < nt_; ++j) {
    const Scalar unscale = cost_scale_ * (j < n_ ? 1 / col_scale_[j] : row_scale_[j - n_]);
    const Scalar t = corig > 0 ? otol * corig / unscale : otol;
    dtol_[j] = std::max(std::min(otol, t), Scalar(1e-13));
  }
}

template <typename Scalar>
void RevisedSimplex<Scalar>::place_nonbasic(int j) {
  const bool lf = std::isfinite(lo_[j]);
  const bool hf = std::isfinite(hi_[j]);
  if (status_[j] == VarStatus::kAtLower && !lf) status_[j] = hf ? VarStatus::kAtUpper : VarStatus::kFree;
  if (status_[j] == VarStatus::kAtUpper && !hf) status_[j] = lf ? VarStatus::kAtLower : VarStatus::kFree;
  if (status_[j] == VarStatus::kFree && (lf || hf)) status_[j] = lf ? VarStatus::kAtLower : VarStatus::kAtUpper;
  switch (status_[j]) {
    case VarStatus::kAtLower: x_[j] = lo_[j]; break;
    case VarStatus::kAtUpper: x_[j] = hi_[j]; break;
    case VarStatus::kFree: x_[j] = 0; break;
    case VarStatus::kBasic: break;
  }
}

template <typename Scalar>
void RevisedSimplex<Scalar>::slack_basis() {
  for (int j = 0; j < n_; ++j) {
    status_[j] = VarStatus::kAtLower;
    place_nonbasic(j);
  }
  for (int i = 0; i < m_; ++i) {
    status_[n_ + i] = VarStatus::kBasic;
    head_[i] = n_ + i;
  }
}

template <typename Scalar>
bool RevisedSimplex<Scalar>::load_basis(const Basis& b) {
  if (static_cast<int>(b.col_status.size()) != n_ || static_cast<int>(b.row_status.size()) != m_) return false;
  int basic = 0;
  for (int j = 0; j < nt_; ++j) {
    const VarStatus s = j < n_ ? b.col_status[j] : b.row_status[j - n_];
    if (s == VarStatus::kBasic) {
      if (basic >= m_) return false;
      head_[basic++] = j;
    }
  }
  if (basic != m_) return false;
  for (int j = 0; j < nt_; ++j) {
    status_[j] = j < n_ ? b.col_status[j] : b.row_status[j - n_];
    if (status_[j] != VarStatus::kBasic) place_nonbasic(j);
  }
  return true;
}

template <typename Scalar>
bool RevisedSimplex<Scalar>::refactor() {
  std::vector<Eigen::Triplet<Scalar, int>> t;
  t.reserve(static_cast<size_t>(m_) * 3);
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (j < n_) {
      for (typename SpMat::InnerIterator it(a_, j); it; ++it) t.emplace_back(it.row(), i, it.value());
    } else {
      t.emplace_back(j - n_, i, Scalar(-1));
    }
  }
  SpMat b(m_, m_);
  b.setFromTriplets(t.begin(), t.end());
  b.makeCompressed();
  lu_ = std::make_unique<Lu>();
  lu_->analyzePattern(b);
  lu_->factorize(b);
  etas_.clear();
  return lu_->info() == Eigen::Success;
}

template <typename Scalar>
void RevisedSimplex<Scalar>::ftran(Vector& v) const {
  v = lu_->solve(v);
  for (const Eta& e : etas_) {
    Scalar t = v[e.row];
    if (t == Scalar(0)) continue;
    t /= e.pivot;
    v[e.row] = t;
    for (size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * t;
  }
}

template <typename Scalar>
void RevisedSimplex<Scalar>::btran(Vector& v) const {
  for (auto e = etas_.rbegin(); e != etas_.rend(); ++e) {
    Scalar s = v[e->row];
    for (size_t k = 0; k < e->idx.size(); ++k) s -= e->val[k] * v[e->idx[k]];
    v[e->row] = s / e->pivot;
  }
  v = lu_->transpose().solve(v);
}

template <typename Scalar>
void RevisedSimplex<Scalar>::add_eta(const Vector& col, int r) {
  using std::abs;
  Eta e;
  e.row = r;
  e.pivot = col[r];
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    if (abs(col[i]) > Scalar(1e-14)) {
      e.idx.push_back(i);
      e.val.push_back(col[i]);
    }
  }
  etas_.push_back(std::move(e));
}

template <typename Scalar>
typename RevisedSimplex<Scalar>::Vector RevisedSimplex<Scalar>::column(int j) const {
  Vector v = Vector::Zero(m_);
  if (j < n_) {
    for (typename SpMat::InnerIterator it(a_, j); it; ++it) v[it.row()] = it.value();
  } else {
    v[j - n_] = Scalar(-1);
  }
  return v;
}

template <typename Scalar>
void RevisedSimplex<Scalar>::compute_primal() {
  Vector rhs = Vector::Zero(m_);
  for (int j = 0; j < nt_; ++j) {
    if (status_[j] == VarStatus::kBasic || x_[j] == Scalar(0)) continue;
    if (j < n_) {
      for (typename SpMat::InnerIterator it(a_, j); it; ++it) rhs[it.row()] -= it.value() * x_[j];
    } else {
      rhs[j - n_] += x_[j];
    }
  }
  Vector xb = rhs;
  ftran(xb);
  // One step of iterative refinement; cut rows make B badly conditioned.
  Vector r = rhs;
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (xb[i] == Scalar(0)) continue;
    if (j < n_) {
      for (typename SpMat::InnerIterator it(a_, j); it; ++it) r[it.row()] -= it.value() * xb[i];
    } else {
      r[j - n_] += xb[i];
    }
  }
  ftran(r);
  xb += r;
  for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
}

template <typename Scalar>
void RevisedSimplex<Scalar>::compute_duals(Vector& y, Vector& d) const {
  y.resize(m_);
  for (int i = 0; i < m_; ++i) y[i] = c_[head_[i]];
  btran(y);
  const Vector aty = a_.transpose() * y;
  d.resize(nt_);
  for (int j = 0; j < n_; ++j) d[j] = status_[j] == VarStatus::kBasic ? Scalar(0) : c_[j] - aty[j];
  for (int i = 0; i < m_; ++i) d[n_ + i] = status_[n_ + i] == VarStatus::kBasic ? Scalar(0) : y[i];
}

template <typename Scalar>
bool RevisedSimplex<Scalar>::primal_feasible() const {
  for (int i = 0; i < m_; ++i) {
    const int v = head_[i];
    if (x_[v] < lo_[v] - ptol_ || x_[v] > hi_[v] + ptol_) return false;
  }
  return true;
}

template <typename Scalar>
bool RevisedSimplex<Scalar>::dual_feasible(const Vector& d) const {
  for (int j = 0; j < nt_; ++j) {
    if (!is_nonbasic_movable(j)) continue;
    switch (status_[j]) {
      case VarStatus::kAtLower: if (d[j] < -dtol_[j]) return false; break;
      case VarStatus::kAtUpper: if (d[j] > dtol_[j]) return false; break;
      case VarStatus::kFree: if (d[j] < -dtol_[j] || d[j] > dtol_[j]) return false; break;
      case VarStatus::kBasic: break;
    }
  }
  return true;
}

// Flips boxed nonbasics whose reduced cost has the wrong sign. Returns false
// (without touching anything) when some infeasibility cannot be repaired.
template <typename Scalar>
bool RevisedSimplex<Scalar>::make_dual_feasible() {
  Vector y;
  compute_duals(y, d_);
  std::vector<int> flips;
  for (int j = 0; j < nt_; ++j) {
    if (!is_nonbasic_movable(j)) continue;
    const bool boxed = std::isfinite(lo_[j]) && std::isfinite(hi_[j]);
    const VarStatus s = status_[j];
    const bool bad = (s == VarStatus::kAtLower && d_[j] < -dtol_[j]) || (s == VarStatus::kAtUpper && d_[j] > dtol_[j]) ||
                     (s == VarStatus::kFree && (d_[j] < -dtol_[j] || d_[j] > dtol_[j]));
    if (!bad) continue;
    if (!boxed) return false;
    flips.push_back(j);
  }
  if (flips.empty()) return true;
  for (int j : flips) {
    status_[j] = status_[j] == VarStatus::kAtLower ? VarStatus::kAtUpper : VarStatus::kAtLower;
    place_nonbasic(j);
  }
  compute_primal();
  return true;
}

template <typename Scalar>
typename RevisedSimplex<Scalar>::Outcome RevisedSimplex<Scalar>::primal() {
  using std::abs;
  const Scalar piv = static_cast<Scalar>(opts_.pivot_tol);
  int degenerate = 0;
  bool bland = false;
  Vector cb(m_), y;
  for (;;) {
    if (iters_ >= opts_.max_iterations) return Outcome::kIterationLimit;
    if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
      if (!refactor()) return Outcome::kNumerical;
      compute_primal();
    }
    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int v = head_[i];
      if (x_[v] < lo_[v] - ptol_) {
        cb[i] = -1;
        phase1 = true;
      } else if (x_[v] > hi_[v] + ptol_) {
        cb[i] = 1;
        phase1 = true;
      } else {
        cb[i] = 0;
      }
    }
    if (!phase1)
      for (int i = 0; i < m_; ++i) cb[i] = c_[head_[i]];
    y = cb;
    btran(y);
    const Vector aty = a_.transpose() * y;

    int q = -1;
    Scalar dq = 0, best = 0;
    for (int j = 0; j < nt_; ++j) {
      if (!is_nonbasic_movable(j)) continue;
      const Scalar cj = phase1 ? Scalar(0) : c_[j];
      const Scalar dj = j < n_ ? cj - aty[j] : y[j - n_];
      const VarStatus s = status_[j];
      const bool ok = (s == VarStatus::kAtLower && dj < -dtol_[j]) || (s == VarStatus::kAtUpper && dj > dtol_[j]) ||
                      (s == VarStatus::kFree && abs(dj) > dtol_[j]);
      if (!ok) continue;
      if (bland) {
        q = j;
        dq = dj;
        break;
      }
      if (abs(dj) > best) {
        best = abs(dj);
        q = j;
        dq = dj;
      }
    }
    if (q < 0) return phase1 ? Outcome::kInfeasible : Outcome::kOptimal;

    Vector aq = column(q);
    ftran(aq);
    const Scalar dir = dq < 0 ? Scalar(1) : Scalar(-1);

    // Ratio test. Harris two-pass normally, textbook min-ratio with smallest
    // index tie-break under Bland's rule.
    const Scalar flip = (std::isfinite(lo_[q]) && std::isfinite(hi_[q])) ? hi_[q] - lo_[q] : kInf<Scalar>;
    Scalar tmax = kInf<Scalar>;
    auto limits = [&](int i, Scalar& exact, Scalar& relaxed, bool& to_upper) -> bool {
      const Scalar a = aq[i];
      if (abs(a) <= piv) return false;
      const Scalar rate = -dir * a;
      const int v = head_[i];
      const Scalar xi = x_[v], l = lo_[v], u = hi_[v];
      if (phase1 && xi < l - ptol_) {
        if (rate <= 0) return false;
        exact = relaxed = (l - xi) / rate;
        to_upper = false;
        return true;
      }
      if (phase1 && xi > u + ptol_) {
        if (rate >= 0) return false;
        exact = relaxed = (xi - u) / -rate;
        to_upper = true;
        return true;
      }
      if (rate < 0 && std::isfinite(l)) {
        exact = (xi - l) / -rate;
        relaxed = (xi - l + ptol_) / -rate;
        to_upper = false;
        return true;
      }
      if (rate > 0 && std::isfinite(u)) {
        exact = (u - xi) / rate;
        relaxed = (u - xi + ptol_) / rate;
        to_upper = true;
        return true;
      }
      return false;
    };
    int r = -1;
    bool leave_upper = false;
    Scalar step = 0;
    if (bland) {
      Scalar tmin = kInf<Scalar>;
      for (int i = 0; i < m_; ++i) {
        Scalar e, rl;
        bool up;
        if (limits(i, e, rl, up)) tmin = std::min(tmin, std::max(e, Scalar(0)));
      }
      tmax = tmin;
      int best_var = nt_;
      for (int i = 0; i < m_; ++i) {
        Scalar e, rl;
        bool up;
        if (!limits(i, e, rl, up)) continue;
        if (std::max(e, Scalar(0)) <= tmin + Scalar(1e-12) * (1 + abs(tmin)) && head_[i] < best_var) {
          best_var = head_[i];
          r = i;
          leave_upper = up;
          step = std::max(e, Scalar(0));
        }
      }
    } else {
      for (int i = 0; i < m_; ++i) {
        Scalar e, rl;
        bool up;
        if (limits(i, e, rl, up)) tmax = std::min(tmax, rl);
      }
      Scalar best_rate = 0;
      for (int i = 0; i < m_; ++i) {
        Scalar e, rl;
        bool up;
        if (!limits(i, e, rl, up) || e > tmax) continue;
        if (abs(aq[i]) > best_rate) {
          best_rate = abs(aq[i]);
          r = i;
          leave_upper = up;
          step = std::max(e, Scalar(0));
        }
      }
    }

    if (flip <= step || (r < 0 && std::isfinite(flip))) {
      // Entering variable runs to its opposite bound before any basic blocks.
      const Scalar delta = dir * flip;
      for (int i = 0; i < m_; ++i) x_[head_[i]] -= aq[i] * delta;
      status_[q] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
      place_nonbasic(q);
      degenerate = 0;
      bland = false;
      ++iters_;
      continue;
    }
    if (r < 0) return phase1 ? Outcome::kNumerical : Outcome::kUnbounded;

    const Scalar delta = dir * step;
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= aq[i] * delta;
    x_[q] += delta;
    const int leaving = head_[r];
    status_[leaving] = leave_upper ? VarStatus::kAtUpper : VarStatus::kAtLower;
    place_nonbasic(leaving);
    head_[r] = q;
    status_[q] = VarStatus::kBasic;
    add_eta(aq, r);
    ++iters_;

    if (step <= Scalar(1e-12)) {
      ++degenerate;
    } else {
      degenerate = 0;
    }
    bland = degenerate > opts_.stall_threshold;
  }
}

template <typename Scalar>
typename RevisedSimplex<Scalar>::Outcome RevisedSimplex<Scalar>::dual() {
  using std::abs;
  const Scalar piv = static_cast<Scalar>(opts_.pivot_tol);
  Vector y;
  compute_duals(y, d_);
  std::vector<Scalar> weight(m_, Scalar(1));
  int stall = 0;
  int retries = 0;
  for (;;) {
    if (iters_ >= opts_.max_iterations) return Outcome::kIterationLimit;
    if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
      if (!refactor()) return Outcome::kNumerical;
      compute_primal();
      compute_duals(y, d_);
    }
    // Dual steepest edge: largest infeasibility^2 / ||e_r' B^-1||^2.
    int r = -1;
    Scalar worst = 0;
    for (int i = 0; i < m_; ++i) {
      const int v = head_[i];
      const Scalar inf = std::max(lo_[v] - x_[v], x_[v] - hi_[v]);
      if (inf > ptol_ && inf * inf > worst * weight[i]) {
        worst = inf * inf / weight[i];
        r = i;
      }
    }
    if (r < 0) return Outcome::kOptimal;
    const int leaving = head_[r];
    const bool to_lower = x_[leaving] < lo_[leaving];

    Vector rho = Vector::Zero(m_);
    rho[r] = 1;
    btran(rho);
    weight[r] = rho.squaredNorm();
    const Vector arow = a_.transpose() * rho;
    auto alpha = [&](int j) { return j < n_ ? arow[j] : -rho[j - n_]; };

    auto eligible = [&](int j, Scalar a) {
      switch (status_[j]) {
        case VarStatus::kAtLower: return to_lower ? a < 0 : a > 0;
        case VarStatus::kAtUpper: return to_lower ? a > 0 : a < 0;
        case VarStatus::kFree: return true;
        case VarStatus::kBasic: return false;
      }
      return false;
    };
    Scalar tmax = kInf<Scalar>;
    for (int j = 0; j < nt_; ++j) {
      if (!is_nonbasic_movable(j)) continue;
      const Scalar a = alpha(j);
      if (abs(a) <= piv || !eligible(j, a)) continue;
      tmax = std::min(tmax, (abs(d_[j]) + dtol_[j]) / abs(a));
    }
    if (!std::isfinite(tmax)) return Outcome::kInfeasible;
    int q = -1;
    Scalar best = 0;
    for (int j = 0; j < nt_; ++j) {
      if (!is_nonbasic_movable(j)) continue;
      const Scalar a = alpha(j);
      if (abs(a) <= piv || !eligible(j, a)) continue;
      if (abs(d_[j]) / abs(a) <= tmax && abs(a) > best) {
        best = abs(a);
        q = j;
      }
    }
    if (q < 0) return Outcome::kInfeasible;
    const Scalar aq_r = alpha(q);

    Vector aq = column(q);
    ftran(aq);
    if (abs(aq[r] - aq_r) > Scalar(1e-7) * (1 + abs(aq[r])) || abs(aq[r]) <= piv) {
      if (++retries > 3 || etas_.empty()) return Outcome::kNumerical;
      if (!refactor()) return Outcome::kNumerical;
      compute_primal();
      compute_duals(y, d_);
      continue;
    }
    retries = 0;

    Vector tau = rho;
    ftran(tau);
    const Scalar wr = weight[r];
    for (int i = 0; i < m_; ++i) {
      if (i == r || aq[i] == Scalar(0)) continue;
      const Scalar ratio = aq[i] / aq[r];
      weight[i] = std::max(weight[i] + ratio * (ratio * wr - 2 * tau[i]), Scalar(1e-6));
    }
    weight[r] = std::max(wr / (aq[r] * aq[r]), Scalar(1e-6));

    const Scalar theta = d_[q] / aq_r;
    const Scalar target = to_lower ? lo_[leaving] : hi_[leaving];
    const Scalar delta = (x_[leaving] - target) / aq[r];
    for (int i = 0; i < m_; ++i) x_[head_[i]] -= aq[i] * delta;
    x_[q] += delta;
    for (int j = 0; j < nt_; ++j) {
      if (status_[j] == VarStatus::kBasic) continue;
      const Scalar a = alpha(j);
      if (a != Scalar(0)) d_[j] -= theta * a;
    }
    d_[q] = 0;
    d_[leaving] = -theta;
    status_[leaving] = to_lower ? VarStatus::kAtLower : VarStatus::kAtUpper;
    place_nonbasic(leaving);
    x_[leaving] = target;
    head_[r] = q;
    status_[q] = VarStatus::kBasic;
    add_eta(aq, r);
    ++iters_;

    if (abs(theta) <= Scalar(1e-12)) {
      if (++stall > 10 * opts_.stall_threshold + 2 * m_) return Outcome::kStalled;
    } else {
      stall = 0;
    }
  }
}

template <typename Scalar>
BasicLpSolution<Scalar> RevisedSimplex<Scalar>::finish(LpStatus st) {
  BasicLpSolution<Scalar> sol;
  sol.status = st;
  sol.iterations = iters_;
  sol.primal.resize(n_);
  for (int j = 0; j < n_; ++j) sol.primal[j] = x_[j] * col_scale_[j];
  sol.row_activity.resize(m_);
  for (int i = 0; i < m_; ++i) sol.row_activity[i] = x_[n_ + i] / row_scale_[i];
  sol.basis.col_status.assign(status_.begin(), status_.begin() + n_);
  sol.basis.row_status.assign(status_.begin() + n_, status_.end());
  sol.objective = p_.objective(sol.primal);
  if (st == LpStatus::kOptimal) {
    Vector y, d;
    if (m_ > 0) {
      compute_duals(y, d);
    } else {
      y.resize(0);
      d = c_;
    }
    sol.row_duals.resize(m_);
    for (int i = 0; i < m_; ++i) sol.row_duals[i] = y[i] * row_scale_[i] * cost_scale_;
    sol.reduced_costs.resize(n_);
    for (int j = 0; j < n_; ++j) sol.reduced_costs[j] = d[j] * cost_scale_ / col_scale_[j];
  }
  return sol;
}

template <typename Scalar>
BasicLpSolution<Scalar> RevisedSimplex<Scalar>::solve(const Basis* warm) {
  p_.check();
  setup();

  if (m_ == 0) {
    for (int j = 0; j < n_; ++j) {
      if (c_[j] > 0) status_[j] = VarStatus::kAtLower;
      else if (c_[j] < 0) status_[j] = VarStatus::kAtUpper;
      else status_[j] = VarStatus::kAtLower;
      const bool unbounded = (c_[j] > 0 && !std::isfinite(lo_[j])) || (c_[j] < 0 && !std::isfinite(hi_[j]));
      if (unbounded) return finish(LpStatus::kUnbounded);
      place_nonbasic(j);
    }
    return finish(LpStatus::kOptimal);
  }

  if (!(warm && load_basis(*warm) && refactor())) {
    slack_basis();
    if (!refactor()) return finish(LpStatus::kNumericalFailure);
  }
  compute_primal();

  bool fell_back = false;
  for (int round = 0; round < 6; ++round) {
    Outcome o = Outcome::kOptimal;
    if (!primal_feasible() && make_dual_feasible()) {
      o = dual();
      if (o == Outcome::kInfeasible) return finish(LpStatus::kInfeasible);
      if (o == Outcome::kIterationLimit) return finish(LpStatus::kIterationLimit);
    }
    if (o != Outcome::kNumerical) o = primal();
    switch (o) {
      case Outcome::kInfeasible: return finish(LpStatus::kInfeasible);
      case Outcome::kUnbounded: return finish(LpStatus::kUnbounded);
      case Outcome::kIterationLimit: return finish(LpStatus::kIterationLimit);
      case Outcome::kNumerical:
      case Outcome::kStalled:
        if (fell_back) return finish(LpStatus::kNumericalFailure);
        fell_back = true;
        slack_basis();
        if (!refactor()) return finish(LpStatus::kNumericalFailure);
        compute_primal();
        continue;
      case Outcome::kOptimal: break;
    }
    // Confirm on a fresh factorization; drift from the eta file can leave
    // small infeasibilities that another pass cleans up.
    if (!refactor()) {
      slack_basis();
      if (!refactor()) return finish(LpStatus::kNumericalFailure);
      compute_primal();
      continue;
    }
    compute_primal();
    Vector y, d;
    compute_duals(y, d);
    if (primal_feasible() && dual_feasible(d)) return finish(LpStatus::kOptimal);
  }
  return finish(LpStatus::kNumericalFailure);
}

}  // namespace

template <typename Scalar>
BasicLpSolution<Scalar> solve_lp(const BasicLpProblem<Scalar>& p, const SolverOptions& opts, const Basis* warm) {
  RevisedSimplex<Scalar> s(p, opts);
  return s.solve(warm);
}

template <typename Scalar>
LpResiduals<Scalar> lp_residuals(const BasicLpProblem<Scalar>& p, const BasicLpSolution<Scalar>& s) {
  using std::abs;
  LpResiduals<Scalar> res;
  const int n = p.num_cols();
  const int m = p.num_rows();
  const auto act = p.activity(s.primal);
  Scalar dual_obj = p.objective_offset;
  for (int j = 0; j < n; ++j) {
    const Scalar x = s.primal[j], l = p.col_lower[j], u = p.col_upper[j];
    res.primal = std::max({res.primal, l - x, x - u});
    const Scalar d = s.reduced_costs[j];
    if (d > 0) {
      if (std::isfinite(l)) dual_obj += d * l;
      else res.dual = std::max(res.dual, d);
      res.complementarity = std::max(res.complementarity, std::isfinite(l) ? d * (x - l) : d);
    } else if (d < 0) {
      if (std::isfinite(u)) dual_obj += d * u;
      else res.dual = std::max(res.dual, -d);
      res.complementarity = std::max(res.complementarity, std::isfinite(u) ? -d * (u - x) : -d);
    }
  }
  for (int i = 0; i < m; ++i) {
    const Scalar a = act[i], b = p.rhs[i], y = s.row_duals[i];
    switch (p.row_sense[i]) {
      case RowSense::kLessEqual:
        res.primal = std::max(res.primal, a - b);
        res.dual = std::max(res.dual, y);
        break;
      case RowSense::kGreaterEqual:
        res.primal = std::max(res.primal, b - a);
        res.dual = std::max(res.dual, -y);
        break;
      case RowSense::kEqual: res.primal = std::max(res.primal, abs(a - b)); break;
    }
    dual_obj += y * b;
    res.complementarity = std::max(res.complementarity, abs(y * (a - b)));
  }
  res.dual_objective = dual_obj;
  res.duality_gap = abs(s.objective - dual_obj);
  return res;
}

template struct BasicLpProblem<double>;
template struct BasicLpProblem<long double>;
template BasicLpSolution<double> solve_lp(const BasicLpProblem<double>&, const SolverOptions&, const Basis*);
template BasicLpSolution<long double> solve_lp(const BasicLpProblem<long double>&, const SolverOptions&,
                                               const Basis*);
template LpResiduals<double> lp_residuals(const BasicLpProblem<double>&, const BasicLpSolution<double>&);
template LpResiduals<long double> lp_residuals(const BasicLpProblem<long double>&,
                                               const BasicLpSolution<long double>&);

}  // namespace gtep
