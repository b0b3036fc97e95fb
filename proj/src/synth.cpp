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

#include "cyclecast/synth.hpp"

#include <algorithm>
#include <cmath>

#include "cyclecast/error.hpp"
#include "cyclecast/random.hpp"

namespace cyclecast {

namespace {

// Distinguishes generator families that share the user seed.
constexpr std::uint64_t kRunStream = 0x72756e73;    // "runs"
constexpr std::uint64_t kConfigStream = 0x63666773;  // "cfgs"
constexpr std::uint64_t kTraceStream = 0x74726365;  // "trce"

constexpr double kMeanUtilization = 0.4;  // of cores; jitter keeps samples <= 0.8
constexpr std::uint64_t kMaxTraceSamples = 50'000'000;

std::uint64_t Fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunId(const std::string& app, const JobConfig& c, std::uint32_t rep) {
  return app + "-m" + std::to_string(c.mappers) + "-r" + std::to_string(c.reducers) + "-" +
         std::to_string(c.input_bytes) + "b-rep" + std::to_string(rep);
}

}  // namespace

std::vector<std::uint32_t> DefaultGrid() { return {4, 8, 12, 16, 20, 24, 28, 32}; }

void Validate(const SynthSpec& spec) {
  Validate(spec.truth);
  auto bad_grid = [](const std::vector<std::uint32_t>& g) {
    return g.empty() || std::find(g.begin(), g.end(), 0u) != g.end();
  };
  if (bad_grid(spec.grid_mappers) || bad_grid(spec.grid_reducers)) {
    throw Error(ErrorKind::kInvalidValue, "grids must be non-empty with entries >= 1");
  }
  if (spec.repetitions < 1) throw Error(ErrorKind::kInvalidValue, "repetitions must be >= 1");
  if (!std::isfinite(spec.noise_rel_sigma) || spec.noise_rel_sigma < 0.0) {
    throw Error(ErrorKind::kInvalidValue, "noise level must be finite and >= 0");
  }
  if (spec.input_bytes < 1) throw Error(ErrorKind::kInvalidValue, "input_bytes must be >= 1");
}

std::vector<JobConfig> GridConfigs(const SynthSpec& spec) {
  std::vector<JobConfig> configs;
  for (std::uint32_t m : spec.grid_mappers) {
    for (std::uint32_t r : spec.grid_reducers) configs.push_back({m, r, spec.input_bytes});
  }
  return configs;
}

std::vector<JobRun> GenerateProfiles(const SynthSpec& spec) {
  Validate(spec);
  const std::vector<JobConfig> configs = GridConfigs(spec);
  return GenerateRunsAt(spec, configs);
}

std::vector<JobRun> GenerateRunsAt(const SynthSpec& spec, std::span<const JobConfig> configs) {
  Validate(spec);
  std::vector<JobRun> runs;
  runs.reserve(configs.size() * spec.repetitions);
  for (const JobConfig& config : configs) {
    Validate(config);
    const double truth = Predict(spec.truth, config).cycles;
    for (std::uint32_t rep = 0; rep < spec.repetitions; ++rep) {
      Xoshiro256 rng(SubstreamKey(spec.seed, {kRunStream, config.mappers, config.reducers,
                                              config.input_bytes, rep}));
      const double eps = spec.noise_rel_sigma * rng.Normal();
      runs.push_back(JobRun{
          .app = spec.app,
          .run_id = RunId(spec.app, config, rep),
          .config = config,
          .total_cycles = truth * std::max(0.0, 1.0 + eps),
      });
    }
  }
  return runs;
}

std::vector<JobConfig> RandomConfigs(std::size_t count, std::uint32_t lo, std::uint32_t hi,
                                     std::uint64_t input_bytes, std::uint64_t seed) {
  if (lo < 1 || hi < lo) throw Error(ErrorKind::kInvalidValue, "need 1 <= lo <= hi");
  Xoshiro256 rng(SubstreamKey(seed, {kConfigStream}));
  std::vector<JobConfig> configs(count);
  for (JobConfig& c : configs) {
    c.mappers = static_cast<std::uint32_t>(rng.UniformInt(lo, hi));
    c.reducers = static_cast<std::uint32_t>(rng.UniformInt(lo, hi));
    c.input_bytes = input_bytes;
  }
  return configs;
}

std::vector<MachineTrace> GenerateTrace(const JobRun& run, const ClusterSpec& cluster,
                                        std::uint64_t seed) {
  Validate(run);
  const auto& machines = cluster.machines();
  std::vector<MachineTrace> traces;
  traces.reserve(machines.size());
  for (const Machine& m : machines) traces.push_back(MachineTrace{m.machine_id, {}});
  if (run.total_cycles == 0.0) return traces;

  Xoshiro256 rng(SubstreamKey(seed, {kTraceStream, run.config.mappers, run.config.reducers,
                                     run.config.input_bytes, Fnv1a(run.run_id)}));
  std::vector<double> weights(machines.size());
  double weight_sum = 0.0;
  for (double& w : weights) {
    w = 0.5 + rng.Uniform();
    weight_sum += w;
  }

  std::uint64_t total_samples = 0;
  for (std::size_t k = 0; k < machines.size(); ++k) {
    const Machine& machine = machines[k];
    const double cpu = run.total_cycles * (weights[k] / weight_sum) / machine.clock_hz;
    const double per_sample = kMeanUtilization * machine.cores;
    const double wanted = std::ceil(cpu / per_sample);
    if (!std::isfinite(wanted) || wanted > static_cast<double>(kMaxTraceSamples)) {
      throw Error(ErrorKind::kInfeasibleDistribution,
                  "trace for " + machine.machine_id + " would need too many samples");
    }
    const auto n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(wanted));
    total_samples += n;
    if (total_samples > kMaxTraceSamples) {
      throw Error(ErrorKind::kInfeasibleDistribution, "trace set would be too long");
    }

    // Jitter weights in [0.5, 1) keep every sample below 2 * cpu / n <= 0.8 cores.
    std::vector<double> jitter(n);
    double jitter_sum = 0.0;
    for (double& j : jitter) {
      j = 0.5 + 0.5 * rng.Uniform();
      jitter_sum += j;
    }
    auto& samples = traces[k].samples;
    samples.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      samples.push_back(CpuSample{i, cpu * (jitter[i] / jitter_sum)});
    }
  }
  return traces;
}

}  // namespace cyclecast
