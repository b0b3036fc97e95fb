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

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cyclecast {

// CPU-seconds consumed by one machine during the one-second interval that
// starts `offset_s` seconds after the trace start.
struct CpuSample {
  std::uint64_t offset_s = 0;
  double cpu_seconds = 0.0;

  bool operator==(const CpuSample&) const = default;
};

struct MachineTrace {
  std::string machine_id;
  std::vector<CpuSample> samples;  // strictly increasing offsets

  bool operator==(const MachineTrace&) const = default;
};

// Throws Error(kInvalidValue) on an empty id, negative or non-finite samples,
// or offsets that are not strictly increasing.
void Validate(const MachineTrace& trace);

struct Machine {
  std::string machine_id;
  double clock_hz = 0.0;
  std::uint32_t cores = 1;

  bool operator==(const Machine&) const = default;
};

// Machine inventory. Ids are unique, clocks positive and core counts >= 1;
// the constructor enforces all three and rejects an empty inventory.
class ClusterSpec {
 public:
  explicit ClusterSpec(std::vector<Machine> machines);

  const std::vector<Machine>& machines() const { return machines_; }
  std::size_t size() const { return machines_.size(); }

  // nullptr when the id is unknown.
  const Machine* Find(const std::string& machine_id) const;

  bool operator==(const ClusterSpec&) const = default;

 private:
  std::vector<Machine> machines_;
};

struct JobConfig {
  std::uint32_t mappers = 1;
  std::uint32_t reducers = 1;
  std::uint64_t input_bytes = 1;

  auto operator<=>(const JobConfig&) const = default;
};

void Validate(const JobConfig& config);

// One measured execution of an application under a configuration.
struct JobRun {
  std::string app;
  std::string run_id;
  JobConfig config;
  double total_cycles = 0.0;

  bool operator==(const JobRun&) const = default;
};

void Validate(const JobRun& run);

// Repetitions of one (app, config) collapsed to their mean.
struct JobProfile {
  std::string app;
  JobConfig config;
  double mean_cycles = 0.0;
  std::uint32_t repetitions = 1;

  bool operator==(const JobProfile&) const = default;
};

// Sum over machines of (sum of that machine's cpu_seconds) x clock_hz.
// Several traces may share a machine id; their samples pool together.
// Throws UnknownMachine and SampleExceedsCores.
double TotalCpuCycles(std::span<const MachineTrace> traces,
                      const ClusterSpec& cluster);

// Groups runs by (app, config) and averages total_cycles. The result is
// ordered by (app, mappers, reducers, input_bytes) and does not depend on the
// order of `runs`. Throws EmptyInput.
std::vector<JobProfile> AggregateRepetitions(std::span<const JobRun> runs);

}  // namespace cyclecast
