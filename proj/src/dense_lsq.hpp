// Copyright 2026 The Cyclecast Authors.
//
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

#pragma once

#include <cstddef>
#include <vector>

namespace cyclecast::internal {

// Column-major dense matrix, just enough for tall-skinny least squares.
class ColumnMatrix {
 public:
  ColumnMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct QrSolve {
  std::vector<double> solution;        // length cols
  std::vector<double> singular_values;  // descending
};

// Householder QR of `a` (rows >= cols), then singular values of R by
// one-sided Jacobi. The triangular solve is skipped (solution left empty)
// when the smallest singular value is not above rank_tol * largest.
QrSolve HouseholderLeastSquares(ColumnMatrix a, std::vector<double> b,
                                double rank_tol);

// Singular values of a small dense matrix, descending.
std::vector<double> JacobiSingularValues(ColumnMatrix a);

}  // namespace cyclecast::internal
