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

#include "oracle/dense_lp.h"

#include <cmath>
#include <stdexcept>

namespace oracle {
namespace {

constexpr double kEps = 1e-10;

using Row = std::vector<double>;

struct Tableau {
  // rows_[i] = [coefficients..., rhs]; basis_[i] is the basic column of row i.
  std::vector<Row> rows;
  std::vector<int> basis;
  int cols = 0;

  void pivot(int r, int q) {
    const double p = rows[r][q];
    for (double& v : rows[r]) v /= p;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<int>(i) == r) continue;
      const double f = rows[i][q];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    basis[r] = q;
  }

  // Minimizes cost over the current feasible basis; false when unbounded.
  // Columns with allowed[j] == false never enter.
  bool optimize(const Row& cost, const std::vector<bool>& allowed) {
    const int m = static_cast<int>(rows.size());
    for (int iter = 0; iter < 100000; ++iter) {
      int q = -1;
      for (int j = 0; j < cols && q < 0; ++j) {
        if (!allowed[j]) continue;
        double d = cost[j];
        for (int i = 0; i < m; ++i) d -= cost[basis[i]] * rows[i][j];
        if (d < -1e-9) q = j;
      }
      if (q < 0) return true;
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (rows[i][q] <= kEps) continue;
        const double ratio = rows[i][cols] / rows[i][q];
        if (r < 0 || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(r, q);
    }
    throw std::runtime_error("dense oracle did not terminate");
  }
};

}  // namespace

DenseResult dense_solve(const riskshed::LinearProgram& lp) {
  using riskshed::Sense;
  const int n = lp.num_cols();
  const int m = lp.num_rows();

  // Map each original column to x = shift + sign * x' (or x+ - x- if free).
  struct Map {
    int pos = -1;
    int neg = -1;
    double shift = 0.0;
    double sign = 1.0;
  };
  std::vector<Map> map(n);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (std::isfinite(lo)) {
      map[j] = {k++, -1, lo, 1.0};
    } else if (std::isfinite(hi)) {
      map[j] = {k++, -1, hi, -1.0};
    } else {
      map[j].pos = k++;
      map[j].neg = k++;
    }
  }
  const int base = k;

  // Constraint rows in terms of x' (dense), sense, rhs.
  std::vector<Row> a;
  std::vector<Sense> sense;
  Row b;
  auto dense_row = [&](int r) {
    Row row(base, 0.0);
    double rhs = lp.rhs[r];
    const auto idx = lp.matrix.row_indices(r);
    const auto val = lp.matrix.row_values(r);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const Map& mp = map[idx[t]];
      if (mp.neg >= 0) {
        row[mp.pos] += val[t];
        row[mp.neg] -= val[t];
      } else {
        row[mp.pos] += val[t] * mp.sign;
        rhs -= val[t] * mp.shift;
      }
    }
    a.push_back(row);
    sense.push_back(lp.senses[r]);
    b.push_back(rhs);
  };
  for (int r = 0; r < m; ++r) dense_row(r);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j]) && std::isfinite(lp.upper[j])) {
      Row row(base, 0.0);
      row[map[j].pos] = 1.0;
      a.push_back(row);
      sense.push_back(Sense::kLessEqual);
      b.push_back(lp.upper[j] - lp.lower[j]);
    }
  }

  const int rows = static_cast<int>(a.size());
  int slacks = 0;
  for (Sense s : sense) slacks += s != Sense::kEqual;
  const int cols = base + slacks + rows;
  Tableau t;
  t.cols = cols;
  t.rows.assign(rows, Row(cols + 1, 0.0));
  t.basis.assign(rows, 0);
  int s_col = base;
  for (int i = 0; i < rows; ++i) {
    Row& row = t.rows[i];
    for (int j = 0; j < base; ++j) row[j] = a[i][j];
    if (sense[i] == Sense::kLessEqual) row[s_col++] = 1.0;
    if (sense[i] == Sense::kGreaterEqual) row[s_col++] = -1.0;
    row[cols] = b[i];
    if (row[cols] < 0.0) {
      for (double& v : row) v = -v;
    }
    row[base + slacks + i] = 1.0;
    t.basis[i] = base + slacks + i;
  }

  Row phase1(cols, 0.0);
  for (int i = 0; i < rows; ++i) phase1[base + slacks + i] = 1.0;
  std::vector<bool> all(cols, true);
  t.optimize(phase1, all);
  double infeas = 0.0;
  for (int i = 0; i < rows; ++i) {
    if (t.basis[i] >= base + slacks) infeas += t.rows[i][cols];
  }
  DenseResult result;
  if (infeas > 1e-7) {
    result.status = DenseStatus::kInfeasible;
    return result;
  }
  // Drive degenerate artificials out of the basis where possible.
  for (int i = 0; i < rows; ++i) {
    if (t.basis[i] < base + slacks) continue;
    for (int j = 0; j < base + slacks; ++j) {
      if (std::abs(t.rows[i][j]) > 1e-9) {
        t.pivot(i, j);
        break;
      }
    }
  }
  Row phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) {
    const Map& mp = map[j];
    if (mp.neg >= 0) {
      phase2[mp.pos] += lp.objective[j];
      phase2[mp.neg] -= lp.objective[j];
    } else {
      phase2[mp.pos] += lp.objective[j] * mp.sign;
    }
  }
  std::vector<bool> allowed(cols, true);
  for (int j = base + slacks; j < cols; ++j) allowed[j] = false;
  if (!t.optimize(phase2, allowed)) {
    result.status = DenseStatus::kUnbounded;
    return result;
  }
  Row value(cols, 0.0);
  for (int i = 0; i < rows; ++i) value[t.basis[i]] = t.rows[i][cols];
  result.status = DenseStatus::kOptimal;
  result.x.assign(n, 0.0);
  result.objective = 0.0;
  for (int j = 0; j < n; ++j) {
    const Map& mp = map[j];
    if (mp.neg >= 0) {
      result.x[j] = value[mp.pos] - value[mp.neg];
    } else {
      result.x[j] = mp.shift + mp.sign * value[mp.pos];
    }
    result.objective += lp.objective[j] * result.x[j];
  }
  return result;
}

}  // namespace oracle
