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
#include <optional>
#include <span>

namespace cyclecast {

inline constexpr double kPredThreshold = 0.25;

// Prediction quality over aligned actual/predicted vectors. MAPE and PRED are
// fractions. An R^2 is empty when its denominator vanishes.
struct EvaluationReport {
  std::size_t n = 0;
  double mape = 0.0;
  double pred25 = 0.0;
  double rmse = 0.0;
  // rmse / mean(actual)
  double rmse_norm = 0.0;
  std::optional<double> r2_paper;
  std::optional<double> r2_standard;
};

// mean |a - p| / |a|. Throws ShapeMismatch, ZeroActual.
double Mape(std::span<const double> actual, std::span<const double> predicted);

// Fraction with |a - p| / |a| strictly below threshold.
// Throws ShapeMismatch, ZeroActual.
double Pred(std::span<const double> actual, std::span<const double> predicted,
            double threshold = kPredThreshold);

// sqrt(mean (a - p)^2). Throws ShapeMismatch.
double Rmse(std::span<const double> actual, std::span<const double> predicted);

// 1 - sum (a - p)^2 / sum (p - mean(a))^2, i.e. the spread is taken over the
// predictions. Empty when that denominator is below 1e-300.
// Throws ShapeMismatch (also for n < 2).
std::optional<double> R2Paper(std::span<const double> actual,
                              std::span<const double> predicted);

// Conventional coefficient of determination,
// 1 - sum (a - p)^2 / sum (a - mean(a))^2. Empty for constant actuals.
std::optional<double> R2Standard(std::span<const double> actual,
                                 std::span<const double> predicted);

// All of the above. Needs n >= 2 and non-zero actuals.
EvaluationReport Evaluate(std::span<const double> actual,
                          std::span<const double> predicted);

}  // namespace cyclecast
