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
#include <string>
#include <vector>

#include "cyclecast/cycles.hpp"
#include "cyclecast/regression.hpp"

namespace cyclecast {

inline constexpr std::uint64_t kDefaultInputBytes = 12'000'000'000ULL;

std::vector<std::uint32_t> DefaultGrid();  // 4, 8, ..., 32

struct SynthSpec {
  ModelCoefficients truth;
  std::vector<std::uint32_t> grid_mappers = DefaultGrid();
  std::vector<std::uint32_t> grid_reducers = DefaultGrid();
  std::uint32_t repetitions = 10;
  double noise_rel_sigma = 0.0;  // std. dev. of the multiplicative noise
  std::uint64_t seed = 0;
  std::string app = "synthetic";
  std::uint64_t input_bytes = kDefaultInputBytes;
};

// Throws Error(kInvalidValue) for empty grids, zero grid entries or
// repetitions, or a negative/non-finite noise level.
void Validate(const SynthSpec& spec);

std::vector<JobConfig> GridConfigs(const SynthSpec& spec);

// One run per (grid point, repetition), mappers-major. Each run's cycles are
// truth(config) * max(0, 1 + eps), eps ~ N(0, noise_rel_sigma^2), drawn from
// a xoshiro256** substream keyed on (seed, mappers, reducers, input_bytes,
// repetition).
std::vector<JobRun> GenerateProfiles(const SynthSpec& spec);

// Same draw rule at arbitrary configs; grid_mappers and grid_reducers are ignored.
std::vector<JobRun> GenerateRunsAt(const SynthSpec& spec, std::span<const JobConfig> configs);

// `count` configs with mappers and reducers uniform on [lo, hi].
std::vector<JobConfig> RandomConfigs(std::size_t count, std::uint32_t lo, std::uint32_t hi,
                                     std::uint64_t input_bytes, std::uint64_t seed);

// 1 Hz per-machine series whose TotalCpuCycles under `cluster` reproduces
// run.total_cycles. Cycles are split across machines by random weights and
// each sample stays at or below 80% of the machine's cores.
// Throws InfeasibleDistribution if the series would be unreasonably long.
std::vector<MachineTrace> GenerateTrace(const JobRun& run, const ClusterSpec& cluster,
                                        std::uint64_t seed);

}  // namespace cyclecast
