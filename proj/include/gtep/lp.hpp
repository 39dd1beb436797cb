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

#ifndef GTEP_LP_HPP
#define GTEP_LP_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace gtep {

enum class RowSense : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

enum class LpStatus : std::uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};

enum class MilpStatus : std::uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNodeLimit,
  kNumericalFailure,
};

const char* to_string(LpStatus s);
const char* to_string(MilpStatus s);

/// Status of a variable in a simplex basis. Row logicals share the enum.
enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

/// Basis descriptor: one status per column followed by one per row logical.
struct Basis {
  std::vector<VarStatus> col_status;
  std::vector<VarStatus> row_status;

  bool empty() const { return col_status.empty() && row_status.empty(); }
};

template <typename Scalar>
constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

/// Sparse minimization problem
///   min c'x + offset  s.t.  a_i x (<=,=,>=) b_i,  lo <= x <= hi,  x_j integer for flagged j.
/// Rows are stored as triplets; the solver builds its own compressed copy.
template <typename Scalar>
struct BasicLpProblem {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<Scalar> cost;
  std::vector<Scalar> col_lower;
  std::vector<Scalar> col_upper;
  std::vector<char> is_integer;
  std::vector<std::string> col_names;

  std::vector<RowSense> row_sense;
  std::vector<Scalar> rhs;
  std::vector<std::string> row_names;

  std::vector<Eigen::Triplet<Scalar, int>> entries;

  /// Rows whose duals are reported as linking multipliers.
  std::vector<int> fixing_rows;

  Scalar objective_offset = 0;

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int add_column(Scalar c, Scalar lo, Scalar hi, bool integer = false, std::string name = {}) {
    cost.push_back(c);
    col_lower.push_back(lo);
    col_upper.push_back(hi);
    is_integer.push_back(integer ? 1 : 0);
    col_names.push_back(std::move(name));
    return num_cols() - 1;
  }

  int add_row(RowSense sense, Scalar b, std::span<const std::pair<int, Scalar>> terms,
              std::string name = {}) {
    const int r = num_rows();
    row_sense.push_back(sense);
    rhs.push_back(b);
    row_names.push_back(std::move(name));
    for (const auto& [col, v] : terms) {
      if (v != Scalar(0)) entries.emplace_back(r, col, v);
    }
    return r;
  }

  int add_row(RowSense sense, Scalar b, std::initializer_list<std::pair<int, Scalar>> terms,
              std::string name = {}) {
    return add_row(sense, b, std::span<const std::pair<int, Scalar>>(terms.begin(), terms.size()),
                   std::move(name));
  }

  bool has_integers() const {
    for (char f : is_integer)
      if (f) return true;
    return false;
  }

  /// Throws std::invalid_argument on out-of-range indices, lo > hi, or non-finite data.
  void check() const;

  /// Compressed column-major constraint matrix.
  Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int> matrix() const;

  /// Row activity a_i x for every row.
  Vector activity(const Vector& x) const;
  Scalar objective(const Vector& x) const;
};

using LpProblem = BasicLpProblem<double>;

template <typename Scalar>
struct BasicLpSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::kNumericalFailure;
  Scalar objective = 0;
  Vector primal;
  Vector row_activity;
  /// d obj / d b_i at the optimum (sign convention independent of row sense).
  Vector row_duals;
  Vector reduced_costs;
  Basis basis;
  std::int64_t iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

using LpSolution = BasicLpSolution<double>;

template <typename Scalar>
struct BasicMilpSolution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  MilpStatus status = MilpStatus::kNumericalFailure;
  Scalar objective = kInf<Scalar>;
  Vector values;
  Scalar bound = -kInf<Scalar>;
  Scalar gap = kInf<Scalar>;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;

  bool optimal() const { return status == MilpStatus::kOptimal; }
  bool has_solution() const { return values.size() > 0; }
};

using MilpSolution = BasicMilpSolution<double>;

struct SolverOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;  // reduced-cost tolerance, relative to the largest |c_j|
  double int_tol = 1e-6;
  double comp_tol = 1e-6;
  double mip_gap = 1e-6;
  double pivot_tol = 1e-9;
  std::int64_t max_iterations = 5'000'000;
  std::int64_t node_limit = 200'000;
  int refactor_interval = 80;
  int stall_threshold = 60;  // consecutive degenerate pivots before Bland's rule
  bool scale = true;
};

}  // namespace gtep

#endif  // GTEP_LP_HPP
