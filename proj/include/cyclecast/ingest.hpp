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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cyclecast/cycles.hpp"

namespace cyclecast {

inline constexpr char kTraceCsvHeader[] = "machine_id,offset_s,cpu_seconds";
inline constexpr double kDefaultGapThreshold = 0.05;

struct IngestWarning {
  enum class Kind { kGapExceedsThreshold, kTruncatedTail };

  Kind kind;
  std::string machine_id;
  std::string detail;
};

struct TraceParseResult {
  std::vector<MachineTrace> traces;  // sorted by machine_id
  std::vector<IngestWarning> warnings;
};

// Reads a trace CSV. Rows may appear in any order; each machine's samples come
// back sorted by offset. A machine whose missing seconds exceed
// `gap_threshold` of its span gets a kGapExceedsThreshold warning, and a last
// row without a terminating newline gets kTruncatedTail.
//
// Throws MalformedHeader, MalformedRow, NegativeCpuSeconds, DuplicateSample.
TraceParseResult ParseTraceCsv(std::istream& in,
                               double gap_threshold = kDefaultGapThreshold);

void WriteTraceCsv(std::ostream& out, std::span<const MachineTrace> traces);

// One machine per line: `machine_id clock_hz cores`. `#` starts a comment.
// Throws DuplicateMachineId, NonPositiveClock, MalformedEntry.
ClusterSpec ParseClusterSpec(std::istream& in);

void WriteClusterSpec(std::ostream& out, const ClusterSpec& cluster);

bool IsValidMachineId(std::string_view id);

}  // namespace cyclecast
