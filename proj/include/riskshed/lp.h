// Copyright 2026 The Riskshed Authors
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

#ifndef RISKSHED_LP_H_
#define RISKSHED_LP_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "riskshed/sparse.h"

namespace riskshed {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense : std::uint8_t { kLessEqual, kEqual, kGreaterEqual };

// min c^T x  s.t.  a_r x (sense_r) b_r,  lower <= x <= upper.
struct LinearProgram {
  std::vector<double> objective;
  SparseMatrix matrix;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  int num_rows() const { return matrix.rows(); }
  int num_cols() const { return matrix.cols(); }

  // Throws InvalidModel on inconsistent dimensions, NaN entries, or
  // lower > upper.
  void check() const;
};

enum class LpStatus : std::uint8_t { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> primal;
  // One multiplier per row; >= 0 for >= rows, <= 0 for <= rows.
  std::vector<double> dual;
  std::vector<double> reduced_cost;
  double objective = 0.0;
  int iterations = 0;
};

struct SimplexOptions {
  // Per solve; 0 means max(10000, 20 (rows + cols)).
  int iteration_limit = 0;
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  int refactor_interval = 100;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 50;
};

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Basis over structural columns followed by one logical per row.
using Basis = std::vector<BasisStatus>;

// Bounded revised simplex (primal with a composite phase 1, and dual) over a
// sparse LU factorization of the basis with product-form updates. Keeps its
// basis between calls so branch-and-bound can change bounds and re-solve.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp, SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  // Throws NumericalFailure when the iteration limit is exceeded.
  LpStatus solve();

  void set_column_bounds(int col, double lower, double upper);
  double column_lower(int col) const;
  double column_upper(int col) const;

  Basis basis() const;
  void set_basis(const Basis& basis);

  // Valid after solve() returned kOptimal.
  LpSolution solution() const;
  int iterations() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

// sum_r dual_r b_r plus the bound terms implied by the reduced costs. Equals
// the primal objective at an optimal basis (strong duality).
double dual_objective(const LinearProgram& lp, const LpSolution& solution);

// Largest row or bound violation of `x`, absolute.
double max_violation(const LinearProgram& lp, std::span<const double> x);

}  // namespace riskshed

#endif  // RISKSHED_LP_H_
