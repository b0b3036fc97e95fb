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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "cyclecast/cycles.hpp"
#include "cyclecast/error.hpp"
#include "cyclecast/regression.hpp"
#include "cyclecast/synth.hpp"
#include "test_util.hpp"

namespace cyclecast {
namespace {

using testing::RelClose;

SynthSpec GridSpec(double noise, std::uint64_t seed) {
  SynthSpec spec;
  spec.truth.a = {1e12, 2e10, 3e8, 4e10, 5e8};
  spec.noise_rel_sigma = noise;
  spec.seed = seed;
  return spec;
}

TEST(GenerateProfiles, NoiselessRunsEqualTruth) {
  const SynthSpec spec = GridSpec(0.0, 1);
  const std::vector<JobRun> runs = GenerateProfiles(spec);
  ASSERT_EQ(runs.size(), 64u * 10u);
  for (const JobRun& r : runs) {
    EXPECT_EQ(r.total_cycles, Predict(spec.truth, r.config).cycles);
    EXPECT_EQ(r.app, "synthetic");
    EXPECT_EQ(r.config.input_bytes, kDefaultInputBytes);
  }
  EXPECT_EQ(runs.front().run_id, "synthetic-m4-r4-12000000000b-rep0");
  EXPECT_EQ(runs[10].config, (JobConfig{4, 8, kDefaultInputBytes}));
}

TEST(GenerateProfiles, DeterministicForSeed) {
  const auto a = GenerateProfiles(GridSpec(0.02, 7));
  EXPECT_EQ(a, GenerateProfiles(GridSpec(0.02, 7)));
  EXPECT_NE(a, GenerateProfiles(GridSpec(0.02, 8)));
}

TEST(GenerateProfiles, IndependentOfGridOrder) {
  SynthSpec forward = GridSpec(0.05, 3);
  SynthSpec reversed = forward;
  std::reverse(reversed.grid_mappers.begin(), reversed.grid_mappers.end());
  reversed.grid_reducers = {12, 4};
  forward.grid_reducers = {4, 12};
  std::map<std::string, double> by_id;
  for (const JobRun& r : GenerateProfiles(forward)) by_id[r.run_id] = r.total_cycles;
  const auto runs = GenerateProfiles(reversed);
  ASSERT_EQ(runs.size(), by_id.size());
  for (const JobRun& r : runs) EXPECT_EQ(by_id.at(r.run_id), r.total_cycles);
}

TEST(GenerateProfiles, NoiseMatchesRequestedSpread) {
  const SynthSpec spec = GridSpec(0.02, 11);
  const auto profiles = AggregateRepetitions(GenerateProfiles(spec));
  ASSERT_EQ(profiles.size(), 64u);
  const double band = 3.0 * 0.02 / std::sqrt(10.0);
  int inside = 0;
  for (const JobProfile& p : profiles) {
    const double truth = Predict(spec.truth, p.config).cycles;
    if (std::abs(p.mean_cycles - truth) <= band * truth) ++inside;
  }
  EXPECT_GE(inside, 61);  // 95% of 64

  // pooled relative deviations should have roughly the requested sigma
  double ss = 0.0;
  int n = 0;
  for (const JobRun& r : GenerateProfiles(spec)) {
    const double rel = r.total_cycles / Predict(spec.truth, r.config).cycles - 1.0;
    ss += rel * rel;
    ++n;
  }
  EXPECT_NEAR(std::sqrt(ss / n), 0.02, 0.002);
}

TEST(GenerateProfiles, ValidatesSpec) {
  SynthSpec spec = GridSpec(0.0, 0);
  spec.repetitions = 0;
  EXPECT_THROW(GenerateProfiles(spec), Error);
  spec = GridSpec(-0.1, 0);
  EXPECT_THROW(GenerateProfiles(spec), Error);
  spec = GridSpec(0.0, 0);
  spec.grid_mappers = {};
  EXPECT_THROW(GenerateProfiles(spec), Error);
  spec.grid_mappers = {0, 4};
  EXPECT_THROW(GenerateProfiles(spec), Error);
}

TEST(RandomConfigs, StaysInRangeAndIsDeterministic) {
  const auto configs = RandomConfigs(500, 4, 32, 99, 5);
  ASSERT_EQ(configs.size(), 500u);
  for (const JobConfig& c : configs) {
    EXPECT_GE(c.mappers, 4u);
    EXPECT_LE(c.mappers, 32u);
    EXPECT_GE(c.reducers, 4u);
    EXPECT_LE(c.reducers, 32u);
    EXPECT_EQ(c.input_bytes, 99u);
  }
  EXPECT_EQ(configs, RandomConfigs(500, 4, 32, 99, 5));
  EXPECT_THROW(RandomConfigs(1, 0, 4, 1, 0), Error);
}

TEST(GenerateTrace, ReproducesTotalCycles) {
  const ClusterSpec cluster({{"A", 3.0e9, 1}, {"B", 2.0e9, 1}});
  const JobRun run{"w", "w-1", {4, 4, 1000}, 8.0e9};
  const auto traces = GenerateTrace(run, cluster, 1);
  ASSERT_EQ(traces.size(), 2u);
  EXPECT_TRUE(RelClose(TotalCpuCycles(traces, cluster), 8.0e9, 1e-9));
}

TEST(GenerateTrace, ZeroCyclesGivesEmptySeries) {
  const ClusterSpec cluster({{"A", 3.0e9, 1}});
  const auto traces = GenerateTrace({"w", "w-0", {4, 4, 1000}, 0.0}, cluster, 1);
  ASSERT_EQ(traces.size(), 1u);
  EXPECT_TRUE(traces[0].samples.empty());
  EXPECT_EQ(TotalCpuCycles(traces, cluster), 0.0);
}

TEST(GenerateTrace, RespectsCoresAndRoundTripsRandomRuns) {
  const ClusterSpec cluster({{"n1", 2.4e9, 4}, {"n2", 3.1e9, 1}, {"n3", 1.8e9, 8}});
  const SynthSpec spec = GridSpec(0.02, 2);
  const auto runs = GenerateRunsAt(spec, RandomConfigs(40, 1, 64, kDefaultInputBytes, 9));
  for (const JobRun& run : runs) {
    const auto traces = GenerateTrace(run, cluster, 17);
    for (const MachineTrace& t : traces) {
      const Machine* m = cluster.Find(t.machine_id);
      ASSERT_NE(m, nullptr);
      EXPECT_NO_THROW(Validate(t));
      for (const CpuSample& s : t.samples) EXPECT_LE(s.cpu_seconds, 0.8 * m->cores);
    }
    EXPECT_TRUE(RelClose(TotalCpuCycles(traces, cluster), run.total_cycles, 1e-9));
    EXPECT_EQ(traces, GenerateTrace(run, cluster, 17));
  }
}

TEST(GenerateTrace, RefusesHugeSeries) {
  const ClusterSpec cluster({{"slow", 1.0, 1}});
  try {
    GenerateTrace({"w", "w-0", {4, 4, 1000}, 1e12}, cluster, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasibleDistribution);
  }
}

TEST(Synth, NoiselessPipelineRecoversTruth) {
  const SynthSpec spec = GridSpec(0.0, 4);
  const TrainingSet set = BuildDesignMatrix(AggregateRepetitions(GenerateProfiles(spec)));
  const ModelCoefficients fit = FitLeastSquares(set.x, set.y);
  for (int j = 0; j < 5; ++j) EXPECT_TRUE(RelClose(fit.a[j], spec.truth.a[j], 1e-8)) << j;
}

}  // namespace
}  // namespace cyclecast
