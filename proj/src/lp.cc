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

#include "riskshed/lp.h"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "riskshed/errors.h"

namespace riskshed {

void LinearProgram::check() const {
  const int m = num_rows();
  const int n = num_cols();
  if (static_cast<int>(objective.size()) != n ||
      static_cast<int>(lower.size()) != n ||
      static_cast<int>(upper.size()) != n) {
    throw InvalidModel("LinearProgram: column vectors do not match " +
                       std::to_string(n) + " columns");
  }
  if (static_cast<int>(senses.size()) != m ||
      static_cast<int>(rhs.size()) != m) {
    throw InvalidModel("LinearProgram: row vectors do not match " +
                       std::to_string(m) + " rows");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) {
      throw InvalidModel("LinearProgram: objective entry " + std::to_string(j) +
                         " is not finite");
    }
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInfinity || upper[j] == -kInfinity) {
      throw InvalidModel("LinearProgram: invalid bounds on column " +
                         std::to_string(j));
    }
  }
  for (int r = 0; r < m; ++r) {
    if (!std::isfinite(rhs[r])) {
      throw InvalidModel("LinearProgram: rhs of row " + std::to_string(r) +
                         " is not finite");
    }
    for (double v : matrix.row_values(r)) {
      if (!std::isfinite(v)) {
        throw InvalidModel("LinearProgram: non-finite coefficient in row " +
                           std::to_string(r));
      }
    }
  }
}

namespace {

using Vec = Eigen::VectorXd;

enum class Phase { kOptimal, kInfeasible, kUnbounded, kSwitch };

// Product-form update: column `row` of the basis was replaced; `index/value`
// hold the nonzeros of B^{-1} a_q before the replacement.
struct Eta {
  int row = 0;
  double pivot = 0.0;
  std::vector<int> index;
  std::vector<double> value;
};

}  // namespace

class SimplexSolver::Impl {
 public:
  Impl(const LinearProgram& lp, SimplexOptions options);

  LpStatus solve();
  void set_column_bounds(int col, double lo, double hi);
  Basis basis() const;
  void set_basis(const Basis& basis);
  LpSolution solution() const;

  int iterations = 0;
  std::vector<double> lower;
  std::vector<double> upper;

 private:
  double col_dot(int j, const Vec& y) const;
  void add_column(int j, double scale, Vec& v) const;
  bool factorize();
  void reset_to_slack_basis();
  void ftran(Vec& v) const;
  void btran(Vec& v) const;
  void compute_primal();
  Vec duals(const Vec& cb) const;
  double feas_tol(double bound) const {
    return options_.primal_tolerance * std::max(1.0, std::abs(bound));
  }
  double infeasibility(int j) const;
  bool primal_feasible() const;
  bool dual_feasible(const Vec& y) const;
  void place_nonbasic(int j);
  void pivot(int q, int r, const Vec& alpha, double step, double leaving_value,
             BasisStatus leaving_status);
  void count_iteration();
  Phase primal_simplex();
  Phase dual_simplex();

  SimplexOptions options_;
  int m_ = 0;
  int n_ = 0;
  // Structural columns in compressed-column form.
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> cost_;
  std::vector<double> x_;
  std::vector<BasisStatus> status_;
  std::vector<int> head_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  bool factored_ = false;
};

SimplexSolver::Impl::Impl(const LinearProgram& lp, SimplexOptions options)
    : options_(options), m_(lp.num_rows()), n_(lp.num_cols()) {
  lp.check();
  const int total = n_ + m_;
  col_start_.assign(n_ + 1, 0);
  for (int r = 0; r < m_; ++r) {
    for (int c : lp.matrix.row_indices(r)) ++col_start_[c + 1];
  }
  for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
  row_index_.resize(lp.matrix.nonzeros());
  value_.resize(lp.matrix.nonzeros());
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int r = 0; r < m_; ++r) {
    const auto idx = lp.matrix.row_indices(r);
    const auto val = lp.matrix.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const int pos = fill[idx[k]]++;
      row_index_[pos] = r;
      value_[pos] = val[k];
    }
  }
  cost_.assign(total, 0.0);
  lower.assign(total, 0.0);
  upper.assign(total, 0.0);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = lp.objective[j];
    lower[j] = lp.lower[j];
    upper[j] = lp.upper[j];
  }
  // Logical s_r = a_r x carries the row bounds.
  for (int r = 0; r < m_; ++r) {
    const int s = n_ + r;
    switch (lp.senses[r]) {
      case Sense::kGreaterEqual:
        lower[s] = lp.rhs[r];
        upper[s] = kInfinity;
        break;
      case Sense::kLessEqual:
        lower[s] = -kInfinity;
        upper[s] = lp.rhs[r];
        break;
      case Sense::kEqual:
        lower[s] = upper[s] = lp.rhs[r];
        break;
    }
  }
  x_.assign(total, 0.0);
  status_.assign(total, BasisStatus::kAtLower);
  head_.resize(m_);
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lower[j]) && std::isfinite(upper[j])) {
      status_[j] = cost_[j] >= 0.0 ? BasisStatus::kAtLower
                                   : BasisStatus::kAtUpper;
    } else if (std::isfinite(lower[j])) {
      status_[j] = BasisStatus::kAtLower;
    } else if (std::isfinite(upper[j])) {
      status_[j] = BasisStatus::kAtUpper;
    } else {
      status_[j] = BasisStatus::kFree;
    }
    place_nonbasic(j);
  }
  for (int r = 0; r < m_; ++r) {
    status_[n_ + r] = BasisStatus::kBasic;
    head_[r] = n_ + r;
  }
}

void SimplexSolver::Impl::place_nonbasic(int j) {
  switch (status_[j]) {
    case BasisStatus::kAtLower:
      if (!std::isfinite(lower[j])) {
        status_[j] = std::isfinite(upper[j]) ? BasisStatus::kAtUpper
                                             : BasisStatus::kFree;
        place_nonbasic(j);
        return;
      }
      x_[j] = lower[j];
      break;
    case BasisStatus::kAtUpper:
      if (!std::isfinite(upper[j])) {
        status_[j] = std::isfinite(lower[j]) ? BasisStatus::kAtLower
                                             : BasisStatus::kFree;
        place_nonbasic(j);
        return;
      }
      x_[j] = upper[j];
      break;
    case BasisStatus::kFree:
      if (std::isfinite(lower[j]) || std::isfinite(upper[j])) {
        status_[j] = std::isfinite(lower[j]) ? BasisStatus::kAtLower
                                             : BasisStatus::kAtUpper;
        place_nonbasic(j);
        return;
      }
      x_[j] = 0.0;
      break;
    case BasisStatus::kBasic:
      break;
  }
}

double SimplexSolver::Impl::col_dot(int j, const Vec& y) const {
  if (j >= n_) return -y[j - n_];
  double s = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
    s += value_[k] * y[row_index_[k]];
  }
  return s;
}

void SimplexSolver::Impl::add_column(int j, double scale, Vec& v) const {
  if (j >= n_) {
    v[j - n_] -= scale;
    return;
  }
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
    v[row_index_[k]] += scale * value_[k];
  }
}

bool SimplexSolver::Impl::factorize() {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(m_ * 2);
  for (int i = 0; i < m_; ++i) {
    const int j = head_[i];
    if (j >= n_) {
      entries.emplace_back(j - n_, i, -1.0);
    } else {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
        entries.emplace_back(row_index_[k], i, value_[k]);
      }
    }
  }
  Eigen::SparseMatrix<double> basis(m_, m_);
  basis.setFromTriplets(entries.begin(), entries.end());
  basis.makeCompressed();
  etas_.clear();
  factored_ = false;
  if (m_ == 0) {
    factored_ = true;
    return true;
  }
  lu_.analyzePattern(basis);
  lu_.factorize(basis);
  if (lu_.info() != Eigen::Success) return false;
  // SparseLU accepts numerically tiny pivots; reject near-singular bases.
  const double logdet = lu_.logAbsDeterminant();
  if (!std::isfinite(logdet)) return false;
  factored_ = true;
  return true;
}

void SimplexSolver::Impl::reset_to_slack_basis() {
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == BasisStatus::kBasic) {
      const double v = x_[j];
      if (std::isfinite(lower[j]) && std::isfinite(upper[j])) {
        status_[j] = std::abs(v - lower[j]) <= std::abs(upper[j] - v)
                         ? BasisStatus::kAtLower
                         : BasisStatus::kAtUpper;
      } else {
        status_[j] = BasisStatus::kAtLower;
      }
      place_nonbasic(j);
    }
  }
  for (int r = 0; r < m_; ++r) {
    status_[n_ + r] = BasisStatus::kBasic;
    head_[r] = n_ + r;
  }
  if (!factorize()) {
    throw NumericalFailure("simplex: slack basis could not be factorized");
  }
}

void SimplexSolver::Impl::ftran(Vec& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v).eval();
  for (const Eta& e : etas_) {
    const double vr = v[e.row] / e.pivot;
    if (vr != 0.0) {
      for (std::size_t k = 0; k < e.index.size(); ++k) {
        v[e.index[k]] -= e.value[k] * vr;
      }
    }
    v[e.row] = vr;
  }
}

void SimplexSolver::Impl::btran(Vec& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    const Eta& e = *it;
    double s = v[e.row];
    for (std::size_t k = 0; k < e.index.size(); ++k) {
      s -= e.value[k] * v[e.index[k]];
    }
    v[e.row] = s / e.pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void SimplexSolver::Impl::compute_primal() {
  Vec rhs = Vec::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] != BasisStatus::kBasic && x_[j] != 0.0) {
      add_column(j, -x_[j], rhs);
    }
  }
  ftran(rhs);
  for (int i = 0; i < m_; ++i) x_[head_[i]] = rhs[i];
}

Vec SimplexSolver::Impl::duals(const Vec& cb) const {
  Vec y = cb;
  btran(y);
  return y;
}

double SimplexSolver::Impl::infeasibility(int j) const {
  if (x_[j] < lower[j] - feas_tol(lower[j])) return lower[j] - x_[j];
  if (x_[j] > upper[j] + feas_tol(upper[j])) return x_[j] - upper[j];
  return 0.0;
}

bool SimplexSolver::Impl::primal_feasible() const {
  for (int i = 0; i < m_; ++i) {
    if (infeasibility(head_[i]) > 0.0) return false;
  }
  return true;
}

bool SimplexSolver::Impl::dual_feasible(const Vec& y) const {
  const double tol = options_.dual_tolerance * 10.0;
  for (int j = 0; j < n_ + m_; ++j) {
    const BasisStatus s = status_[j];
    if (s == BasisStatus::kBasic || lower[j] == upper[j]) continue;
    const double d = cost_[j] - col_dot(j, y);
    if (s == BasisStatus::kAtLower && d < -tol) return false;
    if (s == BasisStatus::kAtUpper && d > tol) return false;
    if (s == BasisStatus::kFree && std::abs(d) > tol) return false;
  }
  return true;
}

void SimplexSolver::Impl::count_iteration() {
  const long long limit =
      options_.iteration_limit > 0
          ? options_.iteration_limit
          : std::max(10000LL, 20LL * (static_cast<long long>(m_) + n_));
  if (++iterations > limit) {
    throw NumericalFailure("simplex: iteration limit of " +
                           std::to_string(limit) + " exceeded");
  }
}

void SimplexSolver::Impl::pivot(int q, int r, const Vec& alpha, double step,
                                double leaving_value,
                                BasisStatus leaving_status) {
  x_[q] += step;
  for (int i = 0; i < m_; ++i) {
    if (alpha[i] != 0.0) x_[head_[i]] -= step * alpha[i];
  }
  const int leaving = head_[r];
  x_[leaving] = leaving_value;
  status_[leaving] = leaving_status;
  status_[q] = BasisStatus::kBasic;
  head_[r] = q;
  Eta eta;
  eta.row = r;
  eta.pivot = alpha[r];
  for (int i = 0; i < m_; ++i) {
    if (i != r && alpha[i] != 0.0) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
  if (static_cast<int>(etas_.size()) >= options_.refactor_interval) {
    if (!factorize()) reset_to_slack_basis();
    compute_primal();
  }
}

Phase SimplexSolver::Impl::primal_simplex() {
  int degenerate = 0;
  bool bland = false;
  Vec cb(m_);
  for (;;) {
    count_iteration();
    bool phase1 = false;
    for (int i = 0; i < m_; ++i) {
      const int b = head_[i];
      if (x_[b] < lower[b] - feas_tol(lower[b])) {
        cb[i] = -1.0;
        phase1 = true;
      } else if (x_[b] > upper[b] + feas_tol(upper[b])) {
        cb[i] = 1.0;
        phase1 = true;
      } else {
        cb[i] = 0.0;
      }
    }
    if (!phase1) {
      for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
    }
    const Vec y = duals(cb);

    // Pricing.
    int q = -1;
    double best = 0.0;
    double dq = 0.0;
    const double dtol = options_.dual_tolerance;
    for (int j = 0; j < n_ + m_; ++j) {
      const BasisStatus s = status_[j];
      if (s == BasisStatus::kBasic || lower[j] == upper[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - col_dot(j, y);
      bool eligible = false;
      if (s == BasisStatus::kAtLower) eligible = d < -dtol;
      if (s == BasisStatus::kAtUpper) eligible = d > dtol;
      if (s == BasisStatus::kFree) eligible = std::abs(d) > dtol;
      if (!eligible) continue;
      if (bland) {
        q = j;
        dq = d;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        q = j;
        dq = d;
      }
    }
    if (q < 0) return phase1 ? Phase::kInfeasible : Phase::kOptimal;

    const double dir = dq < 0.0 ? 1.0 : -1.0;
    Vec alpha = Vec::Zero(m_);
    add_column(q, 1.0, alpha);
    ftran(alpha);

    // Ratio test. A basic variable that is already infeasible only blocks
    // where it regains feasibility.
    double flip = kInfinity;
    if (std::isfinite(lower[q]) && std::isfinite(upper[q])) {
      flip = upper[q] - lower[q];
    }
    auto limit = [&](int i, bool relaxed, double* bound_out) -> double {
      const double a = alpha[i];
      if (std::abs(a) <= options_.pivot_tolerance) return kInfinity;
      const int b = head_[i];
      const double rate = -dir * a;
      const double v = x_[b];
      const double lo = lower[b];
      const double hi = upper[b];
      if (rate < 0.0) {
        if (v < lo - feas_tol(lo)) return kInfinity;
        double bound = lo;
        if (v > hi + feas_tol(hi)) bound = hi;
        if (!std::isfinite(bound)) return kInfinity;
        *bound_out = bound;
        const double slack = v - bound + (relaxed ? feas_tol(bound) : 0.0);
        return std::max(slack, 0.0) / -rate;
      }
      if (v > hi + feas_tol(hi)) return kInfinity;
      double bound = hi;
      if (v < lo - feas_tol(lo)) bound = lo;
      if (!std::isfinite(bound)) return kInfinity;
      *bound_out = bound;
      const double slack = bound - v + (relaxed ? feas_tol(bound) : 0.0);
      return std::max(slack, 0.0) / rate;
    };
    double harris = kInfinity;
    double unused = 0.0;
    for (int i = 0; i < m_; ++i) {
      harris = std::min(harris, limit(i, true, &unused));
    }
    int r = -1;
    double step = kInfinity;
    double leave_bound = 0.0;
    double best_pivot = 0.0;
    for (int i = 0; i < m_; ++i) {
      double bound = 0.0;
      const double t = limit(i, false, &bound);
      if (!std::isfinite(t) || t > harris) continue;
      const double a = std::abs(alpha[i]);
      bool take = false;
      if (r < 0) {
        take = true;
      } else if (bland) {
        take = t < step || (t == step && head_[i] < head_[r]);
      } else {
        take = a > best_pivot;
      }
      if (take) {
        r = i;
        step = t;
        leave_bound = bound;
        best_pivot = a;
      }
    }

    if (r < 0 && !std::isfinite(flip)) {
      if (phase1) throw NumericalFailure("simplex: unbounded phase-1 ray");
      return Phase::kUnbounded;
    }
    if (flip <= step) {
      // Bound flip; the basis does not change.
      for (int i = 0; i < m_; ++i) {
        if (alpha[i] != 0.0) x_[head_[i]] -= dir * flip * alpha[i];
      }
      status_[q] = status_[q] == BasisStatus::kAtLower ? BasisStatus::kAtUpper
                                                        : BasisStatus::kAtLower;
      place_nonbasic(q);
      degenerate = 0;
      bland = false;
      continue;
    }
    const int leaving = head_[r];
    const BasisStatus leaving_status =
        leave_bound == lower[leaving] ? BasisStatus::kAtLower
                                      : BasisStatus::kAtUpper;
    pivot(q, r, alpha, dir * step, leave_bound, leaving_status);
    if (step <= 1e-12) {
      if (++degenerate > options_.degenerate_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

Phase SimplexSolver::Impl::dual_simplex() {
  int degenerate = 0;
  bool bland = false;
  Vec cb(m_);
  Vec row(m_);
  std::vector<double> alpha_row(n_ + m_, 0.0);
  std::vector<double> reduced(n_ + m_, 0.0);
  for (;;) {
    for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
    const Vec y = duals(cb);
    if (!dual_feasible(y)) return Phase::kSwitch;

    // Leaving row: largest bound violation.
    int r = -1;
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double inf = infeasibility(head_[i]);
      if (inf <= 0.0) continue;
      if (bland) {
        if (r < 0 || head_[i] < head_[r]) r = i;
      } else if (inf > worst) {
        worst = inf;
        r = i;
      }
    }
    if (r < 0) return Phase::kOptimal;
    count_iteration();

    const int leaving = head_[r];
    const bool below = x_[leaving] < lower[leaving];
    row.setZero();
    row[r] = 1.0;
    btran(row);

    // Ratio test over the pivot row (Harris two-pass).
    const double ptol = options_.pivot_tolerance;
    const double dtol = options_.dual_tolerance;
    double harris = kInfinity;
    for (int j = 0; j < n_ + m_; ++j) {
      const BasisStatus s = status_[j];
      alpha_row[j] = 0.0;
      if (s == BasisStatus::kBasic || lower[j] == upper[j]) continue;
      const double a = col_dot(j, row);
      alpha_row[j] = a;
      const double d = cost_[j] - col_dot(j, y);
      reduced[j] = d;
      // x_leaving moves by -t * a when x_j moves by t.
      bool ok = false;
      double dd = 0.0;
      if (s == BasisStatus::kAtLower) {
        ok = below ? a < -ptol : a > ptol;
        dd = d;
      } else if (s == BasisStatus::kAtUpper) {
        ok = below ? a > ptol : a < -ptol;
        dd = -d;
      } else {
        ok = std::abs(a) > ptol;
        dd = std::abs(d);
      }
      if (!ok) {
        alpha_row[j] = 0.0;
        continue;
      }
      harris = std::min(harris, (std::max(dd, 0.0) + dtol) / std::abs(a));
    }
    int q = -1;
    double best_ratio = kInfinity;
    double best_pivot = 0.0;
    for (int j = 0; j < n_ + m_; ++j) {
      const double a = alpha_row[j];
      if (a == 0.0) continue;
      const BasisStatus s = status_[j];
      double dd = reduced[j];
      if (s == BasisStatus::kAtUpper) dd = -dd;
      if (s == BasisStatus::kFree) dd = std::abs(dd);
      const double ratio = std::max(dd, 0.0) / std::abs(a);
      if (ratio > harris) continue;
      bool take = false;
      if (q < 0) {
        take = true;
      } else if (bland) {
        take = ratio < best_ratio;
      } else {
        take = std::abs(a) > best_pivot;
      }
      if (take) {
        q = j;
        best_ratio = ratio;
        best_pivot = std::abs(a);
      }
    }
    if (q < 0) return Phase::kInfeasible;

    Vec alpha = Vec::Zero(m_);
    add_column(q, 1.0, alpha);
    ftran(alpha);
    const double ar = alpha[r];
    if (std::abs(ar) <= ptol ||
        std::abs(ar - alpha_row[q]) > 1e-6 * (1.0 + std::abs(ar))) {
      // Row and column disagree: the factorization has drifted.
      if (etas_.empty()) return Phase::kSwitch;
      if (!factorize()) reset_to_slack_basis();
      compute_primal();
      continue;
    }
    const double bound = below ? lower[leaving] : upper[leaving];
    const double step = (x_[leaving] - bound) / ar;
    pivot(q, r, alpha, step, bound,
          below ? BasisStatus::kAtLower : BasisStatus::kAtUpper);
    if (best_ratio <= 1e-12) {
      if (++degenerate > options_.degenerate_limit) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
  }
}

LpStatus SimplexSolver::Impl::solve() {
  if (!factorize()) reset_to_slack_basis();
  compute_primal();
  bool tried_dual = false;
  bool confirmed = false;
  for (int round = 0;; ++round) {
    Vec cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
    const bool df = dual_feasible(duals(cb));
    const bool pf = primal_feasible();
    if (pf && df) return LpStatus::kOptimal;
    Phase result;
    if (!pf && df && !tried_dual) {
      result = dual_simplex();
      if (result == Phase::kSwitch) tried_dual = true;
    } else {
      result = primal_simplex();
    }
    switch (result) {
      case Phase::kOptimal:
        // Re-verify from a fresh factorization before declaring optimality.
        if (!factorize()) reset_to_slack_basis();
        compute_primal();
        if (round > 20) {
          throw NumericalFailure("simplex: optimality could not be confirmed");
        }
        continue;
      case Phase::kInfeasible:
      case Phase::kUnbounded:
        // Confirm against a fresh factorization once before reporting.
        if (!confirmed) {
          confirmed = true;
          if (!factorize()) reset_to_slack_basis();
          compute_primal();
          tried_dual = true;
          continue;
        }
        return result == Phase::kInfeasible ? LpStatus::kInfeasible
                                            : LpStatus::kUnbounded;
      case Phase::kSwitch:
        continue;
    }
  }
}

void SimplexSolver::Impl::set_column_bounds(int col, double lo, double hi) {
  lower[col] = lo;
  upper[col] = hi;
  if (status_[col] != BasisStatus::kBasic) place_nonbasic(col);
}

Basis SimplexSolver::Impl::basis() const { return status_; }

void SimplexSolver::Impl::set_basis(const Basis& basis) {
  if (static_cast<int>(basis.size()) != n_ + m_) {
    throw InvalidModel("set_basis: basis has wrong length");
  }
  int count = 0;
  for (BasisStatus s : basis) count += s == BasisStatus::kBasic;
  if (count != m_) throw InvalidModel("set_basis: wrong number of basics");
  status_ = basis;
  int i = 0;
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == BasisStatus::kBasic) {
      head_[i++] = j;
    } else {
      place_nonbasic(j);
    }
  }
  factored_ = false;
}

LpSolution SimplexSolver::Impl::solution() const {
  LpSolution sol;
  sol.status = LpStatus::kOptimal;
  sol.iterations = iterations;
  sol.primal.assign(x_.begin(), x_.begin() + n_);
  Vec cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = cost_[head_[i]];
  const Vec y = duals(cb);
  sol.dual.assign(y.data(), y.data() + m_);
  sol.reduced_cost.assign(n_, 0.0);
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) {
    if (status_[j] != BasisStatus::kBasic) {
      sol.reduced_cost[j] = cost_[j] - col_dot(j, y);
    }
    obj += cost_[j] * x_[j];
  }
  // Logical duals must respect the row senses exactly.
  for (int r = 0; r < m_; ++r) {
    const int s = n_ + r;
    if (status_[s] == BasisStatus::kBasic) {
      sol.dual[r] = 0.0;
    }
  }
  sol.objective = obj;
  return sol;
}

SimplexSolver::SimplexSolver(const LinearProgram& lp, SimplexOptions options)
    : impl_(std::make_unique<Impl>(lp, options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LpStatus SimplexSolver::solve() { return impl_->solve(); }
void SimplexSolver::set_column_bounds(int col, double lower, double upper) {
  impl_->set_column_bounds(col, lower, upper);
}
double SimplexSolver::column_lower(int col) const { return impl_->lower[col]; }
double SimplexSolver::column_upper(int col) const { return impl_->upper[col]; }
Basis SimplexSolver::basis() const { return impl_->basis(); }
void SimplexSolver::set_basis(const Basis& basis) { impl_->set_basis(basis); }
LpSolution SimplexSolver::solution() const { return impl_->solution(); }
int SimplexSolver::iterations() const { return impl_->iterations; }

double dual_objective(const LinearProgram& lp, const LpSolution& solution) {
  double value = 0.0;
  for (int r = 0; r < lp.num_rows(); ++r) {
    value += solution.dual[r] * lp.rhs[r];
  }
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double d = solution.reduced_cost[j];
    if (d == 0.0) continue;
    const double bound = d > 0.0 ? lp.lower[j] : lp.upper[j];
    if (std::isfinite(bound)) {
      value += d * bound;
    } else if (std::abs(d) > 1e-7) {
      return -kInfinity;
    }
  }
  return value;
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  double worst = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    worst = std::max({worst, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  }
  for (int r = 0; r < lp.num_rows(); ++r) {
    const double a = lp.matrix.row_dot(r, x);
    switch (lp.senses[r]) {
      case Sense::kGreaterEqual:
        worst = std::max(worst, lp.rhs[r] - a);
        break;
      case Sense::kLessEqual:
        worst = std::max(worst, a - lp.rhs[r]);
        break;
      case Sense::kEqual:
        worst = std::max(worst, std::abs(a - lp.rhs[r]));
        break;
    }
  }
  return worst;
}

namespace {

LpSolution solve_once(const LinearProgram& lp, const SimplexOptions& options) {
  SimplexSolver solver(lp, options);
  const LpStatus status = solver.solve();
  if (status != LpStatus::kOptimal) {
    LpSolution sol;
    sol.status = status;
    sol.iterations = solver.iterations();
    return sol;
  }
  LpSolution sol = solver.solution();
  const double scale = 1.0 + std::abs(sol.objective);
  const double gap = std::abs(sol.objective - dual_objective(lp, sol));
  if (gap > 1e-7 * scale || max_violation(lp, sol.primal) > 1e-6 * scale) {
    throw NumericalFailure("simplex: duality gap " + std::to_string(gap) +
                           " at reported optimum");
  }
  return sol;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  try {
    return solve_once(lp, options);
  } catch (const NumericalFailure&) {
    // One retry with frequent refactorization before giving up.
    SimplexOptions careful = options;
    careful.refactor_interval = std::min(options.refactor_interval, 10);
    careful.degenerate_limit = 0;
    return solve_once(lp, careful);
  }
}

}  // namespace riskshed
