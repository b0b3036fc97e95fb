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

#include "cyclecast/metrics.hpp"

#include <cmath>
#include <string>

#include "cyclecast/error.hpp"
#include "numeric_util.hpp"

namespace cyclecast {

namespace {

constexpr double kDegenerateDenominator = 1e-300;

void CheckShapes(std::span<const double> actual, std::span<const double> predicted,
                 std::size_t min_len) {
  if (actual.size() != predicted.size()) {
    throw Error(ErrorKind::kShapeMismatch,
                std::to_string(actual.size()) + " actual vs " +
                    std::to_string(predicted.size()) + " predicted");
  }
  if (actual.size() < min_len) {
    throw Error(ErrorKind::kShapeMismatch,
                "need at least " + std::to_string(min_len) + " observations");
  }
}

void CheckNonZero(std::span<const double> actual) {
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) {
      throw Error(ErrorKind::kZeroActual, "observation " + std::to_string(i));
    }
  }
}

double RelativeError(double a, double p) { return std::abs(a - p) / std::abs(a); }

double Mean(std::span<const double> v) {
  internal::CompensatedSum s;
  for (double x : v) s.Add(x);
  return s.value() / static_cast<double>(v.size());
}

double SumSquaredError(std::span<const double> actual, std::span<const double> predicted) {
  internal::CompensatedSum s;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    s.Add(d * d);
  }
  return s.value();
}

double SumSquaredDeviation(std::span<const double> v, double center) {
  internal::CompensatedSum s;
  for (double x : v) s.Add((x - center) * (x - center));
  return s.value();
}

}  // namespace

double Mape(std::span<const double> actual, std::span<const double> predicted) {
  CheckShapes(actual, predicted, 1);
  CheckNonZero(actual);
  internal::CompensatedSum s;
  for (std::size_t i = 0; i < actual.size(); ++i) s.Add(RelativeError(actual[i], predicted[i]));
  return s.value() / static_cast<double>(actual.size());
}

double Pred(std::span<const double> actual, std::span<const double> predicted,
            double threshold) {
  CheckShapes(actual, predicted, 1);
  CheckNonZero(actual);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (RelativeError(actual[i], predicted[i]) < threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(actual.size());
}

double Rmse(std::span<const double> actual, std::span<const double> predicted) {
  CheckShapes(actual, predicted, 1);
  return std::sqrt(SumSquaredError(actual, predicted) / static_cast<double>(actual.size()));
}

std::optional<double> R2Paper(std::span<const double> actual,
                              std::span<const double> predicted) {
  CheckShapes(actual, predicted, 2);
  const double denom = SumSquaredDeviation(predicted, Mean(actual));
  if (denom < kDegenerateDenominator) return std::nullopt;
  return 1.0 - SumSquaredError(actual, predicted) / denom;
}

std::optional<double> R2Standard(std::span<const double> actual,
                                 std::span<const double> predicted) {
  CheckShapes(actual, predicted, 2);
  const double denom = SumSquaredDeviation(actual, Mean(actual));
  if (denom < kDegenerateDenominator) return std::nullopt;
  return 1.0 - SumSquaredError(actual, predicted) / denom;
}

EvaluationReport Evaluate(std::span<const double> actual,
                          std::span<const double> predicted) {
  CheckShapes(actual, predicted, 2);
  CheckNonZero(actual);
  EvaluationReport report;
  report.n = actual.size();
  report.mape = Mape(actual, predicted);
  report.pred25 = Pred(actual, predicted);
  report.rmse = Rmse(actual, predicted);
  report.rmse_norm = report.rmse / std::abs(Mean(actual));
  report.r2_paper = R2Paper(actual, predicted);
  report.r2_standard = R2Standard(actual, predicted);
  return report;
}

}  // namespace cyclecast
