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

#include <cstdint>
#include <span>
#include <vector>

#include "cyclecast/cycles.hpp"
#include "cyclecast/regression.hpp"

namespace cyclecast {

// Linear law cycles(bytes) = slope * bytes + intercept, anchored at the input
// size a configuration model was trained at. The line must be positive at
// ref_bytes.
struct ScalingModel {
  double slope = 0.0;      // cycles per byte
  double intercept = 0.0;  // cycles
  std::uint64_t ref_bytes = 1;

  double At(double bytes) const { return slope * bytes + intercept; }

  bool operator==(const ScalingModel&) const = default;
};

// Throws NonPositiveReference when the line is not positive at ref_bytes,
// kInvalidValue for non-finite fields or ref_bytes == 0.
void Validate(const ScalingModel& model);

struct SizePoint {
  std::uint64_t input_bytes = 0;
  double mean_cycles = 0.0;
};

// Ordinary least-squares line through the points. Throws DegenerateInput with
// fewer than two distinct sizes and NonPositiveReference if the fitted line is
// not positive at ref_bytes.
ScalingModel FitScaling(std::span<const SizePoint> points, std::uint64_t ref_bytes);

// One point per distinct input size: the mean over (mappers, reducers)
// configurations of each configuration's mean cycles. Sorted by size.
std::vector<SizePoint> SizePointsFromRuns(std::span<const JobRun> runs);

// base * line(target) / line(ref), raised to 0 (and flagged) if negative.
// Throws NonPositiveReference.
Prediction ScalePrediction(double base_cycles, const ScalingModel& model,
                           std::uint64_t target_bytes);

}  // namespace cyclecast
