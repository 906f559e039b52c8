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

#include "riskshed/sparse.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace riskshed {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("SparseMatrix: negative dimension");
  }
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::out_of_range("SparseMatrix: entry (" + std::to_string(t.row) +
                              "," + std::to_string(t.col) +
                              ") outside matrix bounds");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  row_start_.assign(rows + 1, 0);
  col_index_.reserve(entries.size());
  values_.reserve(entries.size());
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    row_start_[r] = static_cast<int>(values_.size());
    while (i < entries.size() && entries[i].row == r) {
      const int c = entries[i].col;
      double v = 0.0;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
        v += entries[i].value;
        ++i;
      }
      if (v != 0.0) {
        col_index_.push_back(c);
        values_.push_back(v);
      }
    }
  }
  row_start_[rows] = static_cast<int>(values_.size());
}

double SparseMatrix::coeff(int r, int c) const {
  const auto idx = row_indices(r);
  const auto it = std::lower_bound(idx.begin(), idx.end(), c);
  if (it == idx.end() || *it != c) return 0.0;
  return values_[row_start_[r] + (it - idx.begin())];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) y[r] = row_dot(r, x);
  return y;
}

std::vector<double> SparseMatrix::transpose_multiply(
    std::span<const double> x) const {
  std::vector<double> y(cols_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    if (x[r] == 0.0) continue;
    for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      y[col_index_[k]] += values_[k] * x[r];
    }
  }
  return y;
}

double SparseMatrix::row_dot(int r, std::span<const double> x) const {
  double s = 0.0;
  for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
    s += values_[k] * x[col_index_[k]];
  }
  return s;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (int r = 0; r < rows_; ++r) {
    for (int k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      out.push_back({r, col_index_[k], values_[k]});
    }
  }
  return out;
}

}  // namespace riskshed
