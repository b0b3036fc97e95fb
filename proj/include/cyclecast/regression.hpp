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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cyclecast/cycles.hpp"

namespace cyclecast {

inline constexpr std::size_t kBasisSize = 5;
inline constexpr char kBasisTag[] = "quad-mr-v1";
inline constexpr std::size_t kMinTrainingRows = 5;
// Applied to the column-scaled design matrix.
inline constexpr double kMaxConditionEstimate = 1e10;
inline constexpr double kRankTolerance = 1e-12;

// [1, M, M^2, R, R^2]
using DesignRow = std::array<double, kBasisSize>;

DesignRow DesignRowFor(const JobConfig& config);

struct DesignMatrix {
  std::vector<DesignRow> rows;
  std::vector<JobConfig> configs;  // source of each row, same order

  std::size_t size() const { return rows.size(); }
};

DesignMatrix DesignMatrixFor(std::span<const JobConfig> configs);

struct TargetVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

struct TrainingSet {
  DesignMatrix x;
  TargetVector y;
};

// Rows follow input order. Throws EmptyInput and MixedApplications.
TrainingSet BuildDesignMatrix(std::span<const JobProfile> profiles);

// Coefficients of a0 + a1*M + a2*M^2 + a3*R + a4*R^2 in the original basis.
struct ModelCoefficients {
  std::array<double, kBasisSize> a{};
  std::string basis_tag = kBasisTag;
  double condition_estimate = 1.0;
  double training_residual = 0.0;

  bool operator==(const ModelCoefficients&) const = default;
};

// Throws Error(kInvalidValue) unless the basis tag matches and every
// coefficient and diagnostic is finite.
void Validate(const ModelCoefficients& model);

// Least-squares fit through a Householder QR of the design matrix after each
// column has been divided by its largest magnitude. condition_estimate is the
// ratio of extreme singular values of that scaled matrix.
//
// Throws ShapeMismatch, RankDeficient (fewer than five rows or distinct
// configs, or a singular value below kRankTolerance of the largest) and
// IllConditioned (condition estimate above kMaxConditionEstimate).
ModelCoefficients FitLeastSquares(const DesignMatrix& x, const TargetVector& y);

// A = (X^T X)^-1 X^T y evaluated literally: the 5x5 normal matrix is formed
// and inverted explicitly in extended precision, after a symmetric diagonal
// equilibration. Kept as the reference that FitLeastSquares is checked
// against. condition_estimate here is sqrt of the 1-norm condition number of
// the equilibrated normal matrix.
//
// Throws ShapeMismatch and SingularNormalMatrix.
ModelCoefficients SolveNormalEquations(const DesignMatrix& x, const TargetVector& y);

struct Prediction {
  double cycles = 0.0;
  bool clamped = false;  // the polynomial was negative and was raised to 0
};

Prediction Predict(const ModelCoefficients& model, const JobConfig& config);

// Unclamped polynomial value; used for residuals.
double EvaluatePolynomial(const ModelCoefficients& model, const DesignRow& row);

// sqrt(sum_j (prediction_j - y_j)^2), using the unclamped polynomial.
// Throws ShapeMismatch.
double ResidualNorm(const ModelCoefficients& model, const DesignMatrix& x,
                    const TargetVector& y);

}  // namespace cyclecast
