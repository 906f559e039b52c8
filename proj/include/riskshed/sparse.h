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

#ifndef RISKSHED_SPARSE_H_
#define RISKSHED_SPARSE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace riskshed {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Immutable compressed-row matrix. Duplicate (row, col) entries are summed
// and explicit zeros are dropped on construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : SparseMatrix(rows, cols, {}) {}
  SparseMatrix(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const int> row_indices(int r) const {
    return {col_index_.data() + row_start_[r],
            static_cast<std::size_t>(row_start_[r + 1] - row_start_[r])};
  }
  std::span<const double> row_values(int r) const {
    return {values_.data() + row_start_[r],
            static_cast<std::size_t>(row_start_[r + 1] - row_start_[r])};
  }

  double coeff(int r, int c) const;

  // y = M x
  std::vector<double> multiply(std::span<const double> x) const;
  // y = M^T x
  std::vector<double> transpose_multiply(std::span<const double> x) const;
  double row_dot(int r, std::span<const double> x) const;

  std::vector<Triplet> triplets() const;

  bool operator==(const SparseMatrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_start_ = {0};
  std::vector<int> col_index_;
  std::vector<double> values_;
};

}  // namespace riskshed

#endif  // RISKSHED_SPARSE_H_
