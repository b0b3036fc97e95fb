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

#include "cyclecast/error.hpp"

namespace cyclecast {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidValue: return "InvalidValue";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kUnknownMachine: return "UnknownMachine";
    case ErrorKind::kSampleExceedsCores: return "SampleExceedsCores";
    case ErrorKind::kMalformedHeader: return "MalformedHeader";
    case ErrorKind::kMalformedRow: return "MalformedRow";
    case ErrorKind::kNegativeCpuSeconds: return "NegativeCpuSeconds";
    case ErrorKind::kDuplicateSample: return "DuplicateSample";
    case ErrorKind::kDuplicateMachineId: return "DuplicateMachineId";
    case ErrorKind::kNonPositiveClock: return "NonPositiveClock";
    case ErrorKind::kMalformedEntry: return "MalformedEntry";
    case ErrorKind::kMixedApplications: return "MixedApplications";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kIllConditioned: return "IllConditioned";
    case ErrorKind::kSingularNormalMatrix: return "SingularNormalMatrix";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kZeroActual: return "ZeroActual";
    case ErrorKind::kDegenerateInput: return "DegenerateInput";
    case ErrorKind::kNonPositiveReference: return "NonPositiveReference";
    case ErrorKind::kInfeasibleDistribution: return "InfeasibleDistribution";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kCorruptRecord: return "CorruptRecord";
    case ErrorKind::kUnsupportedSchema: return "UnsupportedSchema";
  }
  return "Unknown";
}

namespace {

std::string FormatMessage(ErrorKind kind, const std::string& detail,
                          std::optional<std::size_t> line) {
  std::string msg(ErrorKindName(kind));
  if (line) msg += " (line " + std::to_string(*line) + ")";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& detail,
             std::optional<std::size_t> line)
    : std::runtime_error(FormatMessage(kind, detail, line)),
      kind_(kind),
      line_(line) {}

}  // namespace cyclecast
