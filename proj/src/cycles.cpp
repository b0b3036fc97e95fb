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

#include "cyclecast/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "cyclecast/error.hpp"
#include "numeric_util.hpp"

namespace cyclecast {

void Validate(const MachineTrace& trace) {
  if (trace.machine_id.empty()) {
    throw Error(ErrorKind::kInvalidValue, "machine_id must be non-empty");
  }
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const CpuSample& s = trace.samples[i];
    if (!std::isfinite(s.cpu_seconds) || s.cpu_seconds < 0.0) {
      throw Error(ErrorKind::kInvalidValue,
                  "machine " + trace.machine_id + ": cpu_seconds must be finite and >= 0");
    }
    if (i > 0 && trace.samples[i - 1].offset_s >= s.offset_s) {
      throw Error(ErrorKind::kInvalidValue,
                  "machine " + trace.machine_id + ": offsets not strictly increasing");
    }
  }
}

ClusterSpec::ClusterSpec(std::vector<Machine> machines)
    : machines_(std::move(machines)) {
  if (machines_.empty()) {
    throw Error(ErrorKind::kEmptyInput, "cluster needs at least one machine");
  }
  std::set<std::string> seen;
  for (const Machine& m : machines_) {
    if (m.machine_id.empty()) {
      throw Error(ErrorKind::kInvalidValue, "machine_id must be non-empty");
    }
    if (!seen.insert(m.machine_id).second) {
      throw Error(ErrorKind::kDuplicateMachineId, m.machine_id);
    }
    if (!(m.clock_hz > 0.0) || !std::isfinite(m.clock_hz)) {
      throw Error(ErrorKind::kNonPositiveClock, m.machine_id);
    }
    if (m.cores < 1) {
      throw Error(ErrorKind::kInvalidValue, m.machine_id + ": cores must be >= 1");
    }
  }
}

const Machine* ClusterSpec::Find(const std::string& machine_id) const {
  auto it = std::find_if(machines_.begin(), machines_.end(),
                         [&](const Machine& m) { return m.machine_id == machine_id; });
  return it == machines_.end() ? nullptr : &*it;
}

void Validate(const JobConfig& config) {
  if (config.mappers < 1 || config.reducers < 1 || config.input_bytes < 1) {
    throw Error(ErrorKind::kInvalidValue,
                "mappers, reducers and input_bytes must all be >= 1");
  }
}

void Validate(const JobRun& run) {
  Validate(run.config);
  if (!std::isfinite(run.total_cycles) || run.total_cycles < 0.0) {
    throw Error(ErrorKind::kInvalidValue,
                "run " + run.run_id + ": total_cycles must be finite and >= 0");
  }
}

double TotalCpuCycles(std::span<const MachineTrace> traces,
                      const ClusterSpec& cluster) {
  std::map<std::string, internal::CompensatedSum> cpu_seconds;
  for (const MachineTrace& trace : traces) {
    const Machine* machine = cluster.Find(trace.machine_id);
    if (machine == nullptr) {
      throw Error(ErrorKind::kUnknownMachine, trace.machine_id);
    }
    internal::CompensatedSum& acc = cpu_seconds[trace.machine_id];
    for (const CpuSample& s : trace.samples) {
      if (s.cpu_seconds > static_cast<double>(machine->cores)) {
        throw Error(ErrorKind::kSampleExceedsCores,
                    trace.machine_id + " at offset " + std::to_string(s.offset_s));
      }
      acc.Add(s.cpu_seconds);
    }
  }
  internal::CompensatedSum total;
  for (const auto& [id, acc] : cpu_seconds) {
    total.Add(acc.value() * cluster.Find(id)->clock_hz);
  }
  return total.value();
}

std::vector<JobProfile> AggregateRepetitions(std::span<const JobRun> runs) {
  if (runs.empty()) throw Error(ErrorKind::kEmptyInput, "no runs to aggregate");

  using Key = std::tuple<std::string, std::uint32_t, std::uint32_t, std::uint64_t>;
  std::map<Key, std::vector<double>> groups;
  for (const JobRun& run : runs) {
    Validate(run);
    groups[Key{run.app, run.config.mappers, run.config.reducers,
               run.config.input_bytes}]
        .push_back(run.total_cycles);
  }

  std::vector<JobProfile> profiles;
  profiles.reserve(groups.size());
  for (auto& [key, cycles] : groups) {
    // Sorting fixes the summation order, so input order cannot leak into the
    // last bits of the mean.
    std::sort(cycles.begin(), cycles.end());
    internal::CompensatedSum sum;
    for (double c : cycles) sum.Add(c);
    const auto& [app, mappers, reducers, input_bytes] = key;
    profiles.push_back(JobProfile{
        .app = app,
        .config = JobConfig{mappers, reducers, input_bytes},
        .mean_cycles = sum.value() / static_cast<double>(cycles.size()),
        .repetitions = static_cast<std::uint32_t>(cycles.size()),
    });
  }
  return profiles;
}

}  // namespace cyclecast
