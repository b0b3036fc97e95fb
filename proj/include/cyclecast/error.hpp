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
#include <stdexcept>
#include <string>
#include <string_view>

namespace cyclecast {

enum class ErrorKind {
  kInvalidValue,
  kEmptyInput,
  kUnknownMachine,
  kSampleExceedsCores,
  kMalformedHeader,
  kMalformedRow,
  kNegativeCpuSeconds,
  kDuplicateSample,
  kDuplicateMachineId,
  kNonPositiveClock,
  kMalformedEntry,
  kMixedApplications,
  kRankDeficient,
  kIllConditioned,
  kSingularNormalMatrix,
  kShapeMismatch,
  kZeroActual,
  kDegenerateInput,
  kNonPositiveReference,
  kInfeasibleDistribution,
  kIoFailure,
  kCorruptRecord,
  kUnsupportedSchema,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure raised by the library. `line()` is set for parse errors that
// can be pinned to a 1-based input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail,
        std::optional<std::size_t> line = std::nullopt);

  ErrorKind kind() const { return kind_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace cyclecast
