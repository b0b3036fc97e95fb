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

#include "cyclecast/regression.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "cyclecast/error.hpp"
#include "dense_lsq.hpp"
#include "numeric_util.hpp"

namespace cyclecast {

DesignRow DesignRowFor(const JobConfig& config) {
  const double m = config.mappers;
  const double r = config.reducers;
  return {1.0, m, m * m, r, r * r};
}

DesignMatrix DesignMatrixFor(std::span<const JobConfig> configs) {
  DesignMatrix x;
  x.rows.reserve(configs.size());
  for (const JobConfig& c : configs) {
    Validate(c);
    x.rows.push_back(DesignRowFor(c));
    x.configs.push_back(c);
  }
  return x;
}

TrainingSet BuildDesignMatrix(std::span<const JobProfile> profiles) {
  if (profiles.empty()) throw Error(ErrorKind::kEmptyInput, "no profiles");
  TrainingSet set;
  const std::string& app = profiles.front().app;
  for (const JobProfile& p : profiles) {
    if (p.app != app) {
      throw Error(ErrorKind::kMixedApplications, "'" + app + "' and '" + p.app + "'");
    }
    Validate(p.config);
    set.x.rows.push_back(DesignRowFor(p.config));
    set.x.configs.push_back(p.config);
    set.y.values.push_back(p.mean_cycles);
  }
  return set;
}

void Validate(const ModelCoefficients& model) {
  if (model.basis_tag != kBasisTag) {
    throw Error(ErrorKind::kInvalidValue, "unknown basis '" + model.basis_tag + "'");
  }
  for (double a : model.a) {
    if (!std::isfinite(a)) throw Error(ErrorKind::kInvalidValue, "non-finite coefficient");
  }
  if (!std::isfinite(model.condition_estimate) || !(model.condition_estimate > 0.0)) {
    throw Error(ErrorKind::kInvalidValue, "condition estimate must be positive");
  }
  if (!std::isfinite(model.training_residual) || model.training_residual < 0.0) {
    throw Error(ErrorKind::kInvalidValue, "training residual must be >= 0");
  }
}

namespace {

void CheckShapes(const DesignMatrix& x, const TargetVector& y) {
  if (x.rows.size() != y.values.size()) {
    throw Error(ErrorKind::kShapeMismatch,
                std::to_string(x.rows.size()) + " rows vs " +
                    std::to_string(y.values.size()) + " targets");
  }
}

void CheckTargets(const TargetVector& y) {
  for (double v : y.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::kInvalidValue, "targets must be finite and >= 0");
    }
  }
}

std::size_t DistinctConfigs(const DesignMatrix& x) {
  std::set<std::pair<double, double>> seen;
  for (const DesignRow& row : x.rows) seen.emplace(row[1], row[3]);
  return seen.size();
}

}  // namespace

ModelCoefficients FitLeastSquares(const DesignMatrix& x, const TargetVector& y) {
  CheckShapes(x, y);
  CheckTargets(y);
  const std::size_t k = x.size();
  if (k < kMinTrainingRows || DistinctConfigs(x) < kMinTrainingRows) {
    throw Error(ErrorKind::kRankDeficient,
                "need at least 5 distinct configurations, got " +
                    std::to_string(DistinctConfigs(x)));
  }

  std::array<double, kBasisSize> scale{};
  for (const DesignRow& row : x.rows) {
    for (std::size_t j = 0; j < kBasisSize; ++j) {
      scale[j] = std::max(scale[j], std::abs(row[j]));
    }
  }
  internal::ColumnMatrix scaled(k, kBasisSize);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < kBasisSize; ++j) scaled(i, j) = x.rows[i][j] / scale[j];
  }

  const internal::QrSolve qr =
      internal::HouseholderLeastSquares(std::move(scaled), y.values, kRankTolerance);
  const double smax = qr.singular_values.front();
  const double smin = qr.singular_values.back();
  if (qr.solution.empty()) {
    throw Error(ErrorKind::kRankDeficient, "design matrix columns are collinear");
  }
  const double condition = smax / smin;
  if (condition > kMaxConditionEstimate) {
    throw Error(ErrorKind::kIllConditioned,
                "condition estimate " + internal::FormatShortest(condition));
  }

  ModelCoefficients model;
  for (std::size_t j = 0; j < kBasisSize; ++j) model.a[j] = qr.solution[j] / scale[j];
  model.condition_estimate = condition;
  model.training_residual = ResidualNorm(model, x, y);
  return model;
}

ModelCoefficients SolveNormalEquations(const DesignMatrix& x, const TargetVector& y) {
  CheckShapes(x, y);
  constexpr std::size_t n = kBasisSize;
  using Real = long double;

  Real g[n][n] = {};
  Real rhs[n] = {};
  for (std::size_t r = 0; r < x.size(); ++r) {
    const DesignRow& row = x.rows[r];
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] += static_cast<Real>(row[i]) * y.values[r];
      for (std::size_t j = 0; j < n; ++j) g[i][j] += static_cast<Real>(row[i]) * row[j];
    }
  }

  Real d[n];
  for (std::size_t i = 0; i < n; ++i) {
    if (!(g[i][i] > 0)) throw Error(ErrorKind::kSingularNormalMatrix, "zero column");
    d[i] = 1 / std::sqrt(g[i][i]);
  }
  Real a[n][n], inv[n][n] = {};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = d[i] * g[i][j] * d[j];
    inv[i][i] = 1;
  }
  Real norm_a = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Real col = 0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(a[i][j]);
    norm_a = std::max(norm_a, col);
  }

  // Gauss-Jordan with partial pivoting. The equilibrated matrix has a unit
  // diagonal, so an absolute pivot floor is meaningful.
  constexpr Real kPivotFloor = 1e-17L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (std::abs(a[p][c]) <= kPivotFloor) {
      throw Error(ErrorKind::kSingularNormalMatrix, "X^T X is not invertible");
    }
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Real pivot = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= pivot;
      inv[c][j] /= pivot;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Real f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  Real norm_inv = 0;
  for (std::size_t j = 0; j < n; ++j) {
    Real col = 0;
    for (std::size_t i = 0; i < n; ++i) col += std::abs(inv[i][j]);
    norm_inv = std::max(norm_inv, col);
  }

  ModelCoefficients model;
  for (std::size_t i = 0; i < n; ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < n; ++j) s += inv[i][j] * d[j] * rhs[j];
    model.a[i] = static_cast<double>(d[i] * s);
  }
  model.condition_estimate = static_cast<double>(std::sqrt(norm_a * norm_inv));
  model.training_residual = ResidualNorm(model, x, y);
  return model;
}

double EvaluatePolynomial(const ModelCoefficients& model, const DesignRow& row) {
  double y = 0.0;
  for (std::size_t j = 0; j < kBasisSize; ++j) y += model.a[j] * row[j];
  return y;
}

Prediction Predict(const ModelCoefficients& model, const JobConfig& config) {
  const double y = EvaluatePolynomial(model, DesignRowFor(config));
  if (y < 0.0) return {0.0, true};
  return {y, false};
}

double ResidualNorm(const ModelCoefficients& model, const DesignMatrix& x,
                    const TargetVector& y) {
  CheckShapes(x, y);
  internal::CompensatedSum ss;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = EvaluatePolynomial(model, x.rows[i]) - y.values[i];
    ss.Add(r * r);
  }
  return std::sqrt(ss.value());
}

}  // namespace cyclecast
