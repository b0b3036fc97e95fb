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

#include "cyclecast/scaling.hpp"

#include <cmath>
#include <map>
#include <set>

#include "cyclecast/error.hpp"
#include "numeric_util.hpp"

namespace cyclecast {

void Validate(const ScalingModel& model) {
  if (!std::isfinite(model.slope) || !std::isfinite(model.intercept) || model.ref_bytes == 0) {
    throw Error(ErrorKind::kInvalidValue, "scaling model fields must be finite, ref_bytes >= 1");
  }
  if (!(model.At(static_cast<double>(model.ref_bytes)) > 0.0)) {
    throw Error(ErrorKind::kNonPositiveReference,
                "line is not positive at " + std::to_string(model.ref_bytes) + " bytes");
  }
}

ScalingModel FitScaling(std::span<const SizePoint> points, std::uint64_t ref_bytes) {
  std::set<std::uint64_t> sizes;
  for (const SizePoint& p : points) sizes.insert(p.input_bytes);
  if (sizes.size() < 2) {
    throw Error(ErrorKind::kDegenerateInput, "need at least two distinct input sizes");
  }

  // Centered sums keep the 1e9-scale abscissae from cancelling.
  internal::CompensatedSum sx, sy;
  for (const SizePoint& p : points) {
    sx.Add(static_cast<double>(p.input_bytes));
    sy.Add(p.mean_cycles);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  internal::CompensatedSum sxx, sxy;
  for (const SizePoint& p : points) {
    const double dx = static_cast<double>(p.input_bytes) - mx;
    sxx.Add(dx * dx);
    sxy.Add(dx * (p.mean_cycles - my));
  }

  ScalingModel model;
  model.slope = sxy.value() / sxx.value();
  model.intercept = my - model.slope * mx;
  model.ref_bytes = ref_bytes;
  Validate(model);
  return model;
}

std::vector<SizePoint> SizePointsFromRuns(std::span<const JobRun> runs) {
  std::map<std::uint64_t, internal::CompensatedSum> sums;
  std::map<std::uint64_t, std::size_t> counts;
  for (const JobProfile& p : AggregateRepetitions(runs)) {
    sums[p.config.input_bytes].Add(p.mean_cycles);
    ++counts[p.config.input_bytes];
  }
  std::vector<SizePoint> points;
  for (const auto& [bytes, sum] : sums) {
    points.push_back({bytes, sum.value() / static_cast<double>(counts[bytes])});
  }
  return points;
}

Prediction ScalePrediction(double base_cycles, const ScalingModel& model,
                           std::uint64_t target_bytes) {
  Validate(model);
  if (!std::isfinite(base_cycles) || base_cycles < 0.0) {
    throw Error(ErrorKind::kInvalidValue, "base cycles must be finite and >= 0");
  }
  if (target_bytes == model.ref_bytes) return {base_cycles, false};
  const double factor = model.At(static_cast<double>(target_bytes)) /
                        model.At(static_cast<double>(model.ref_bytes));
  if (factor < 0.0) return {0.0, true};
  return {base_cycles * factor, false};
}

}  // namespace cyclecast
