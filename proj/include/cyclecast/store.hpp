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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclecast/cycles.hpp"
#include "cyclecast/metrics.hpp"
#include "cyclecast/regression.hpp"
#include "cyclecast/scaling.hpp"

namespace cyclecast {

inline constexpr int kRunsSchemaVersion = 1;

// Runs file: one JSON object per line with keys, in order,
// schema_version, app, run_id, mappers, reducers, input_bytes, total_cycles.
std::string RunToJsonLine(const JobRun& run);

// Appends under an exclusive flock; all lines go out in a single O_APPEND
// write sequence while the lock is held. Appending nothing leaves the file
// untouched. Throws IoFailure.
std::size_t AppendRuns(const std::filesystem::path& path, std::span<const JobRun> runs);

// Replaces the file contents atomically (temp file + rename).
void WriteRuns(const std::filesystem::path& path, std::span<const JobRun> runs);

// Runs in file order, optionally restricted to one app. An unterminated final
// line that does not parse is taken to be an append in flight and skipped.
// Throws IoFailure, CorruptRecord, UnsupportedSchema.
std::vector<JobRun> LoadRuns(const std::filesystem::path& path,
                             const std::optional<std::string>& app_filter = std::nullopt);

// Everything the model file holds.
struct ModelRecord {
  std::string app;
  ModelCoefficients coefficients;
  std::uint64_t ref_input_bytes = 1;
  std::optional<ScalingModel> scaling;

  bool operator==(const ModelRecord&) const = default;
};

std::string ModelToJson(const ModelRecord& record);
ModelRecord ModelFromJson(const std::string& text);

// Throws IoFailure; LoadModel also CorruptRecord.
void SaveModel(const std::filesystem::path& path, const ModelRecord& record);
ModelRecord LoadModel(const std::filesystem::path& path);

// {"n":..,"mape":..,"pred25":..,"rmse":..,"rmse_norm":..,"r2_paper":..,
//  "r2_standard":..} with null for an undefined R^2.
std::string ReportToJson(const EvaluationReport& report);

}  // namespace cyclecast
