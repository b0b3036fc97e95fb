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

#include "cyclecast/ingest.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cyclecast/error.hpp"
#include "numeric_util.hpp"

namespace cyclecast {

namespace {

struct Line {
  std::string_view text;
  std::size_t number;  // 1-based
};

// Splits on LF. `terminated` reports whether the final line ended with LF.
std::vector<Line> SplitLines(std::string_view text, bool& terminated) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  terminated = true;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back({text.substr(start), number});
      terminated = false;
      break;
    }
    lines.push_back({text.substr(start, end - start), number});
    start = end + 1;
    ++number;
  }
  return lines;
}

std::vector<std::string_view> SplitOn(std::string_view text, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(sep, start);
    fields.push_back(text.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

std::vector<std::string_view> SplitWhitespace(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < text.size() && !(text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

std::string ReadAll(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

bool IsValidMachineId(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

TraceParseResult ParseTraceCsv(std::istream& in, double gap_threshold) {
  const std::string text = ReadAll(in);
  bool terminated = true;
  const std::vector<Line> lines = SplitLines(text, terminated);
  if (lines.empty() || lines.front().text != kTraceCsvHeader) {
    throw Error(ErrorKind::kMalformedHeader,
                std::string("expected '") + kTraceCsvHeader + "'", 1);
  }

  TraceParseResult result;
  std::map<std::string, std::vector<CpuSample>> by_machine;
  std::set<std::pair<std::string, std::uint64_t>> seen;
  std::string last_machine;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    if (line.text.empty()) continue;
    const auto fields = SplitOn(line.text, ',');
    if (fields.size() != 3 || !IsValidMachineId(fields[0])) {
      throw Error(ErrorKind::kMalformedRow, std::string(line.text), line.number);
    }
    std::uint64_t offset = 0;
    double cpu = 0.0;
    if (!internal::ParseNumber(fields[1], offset) ||
        !internal::ParseNumber(fields[2], cpu) || !std::isfinite(cpu)) {
      throw Error(ErrorKind::kMalformedRow, std::string(line.text), line.number);
    }
    if (cpu < 0.0) {
      throw Error(ErrorKind::kNegativeCpuSeconds, std::string(line.text), line.number);
    }
    std::string id(fields[0]);
    if (!seen.emplace(id, offset).second) {
      throw Error(ErrorKind::kDuplicateSample,
                  id + " at offset " + std::to_string(offset), line.number);
    }
    by_machine[id].push_back(CpuSample{offset, cpu});
    last_machine = std::move(id);
  }

  if (!terminated && lines.size() > 1 && !lines.back().text.empty()) {
    result.warnings.push_back({IngestWarning::Kind::kTruncatedTail, last_machine,
                               "last row has no terminating newline (line " +
                                   std::to_string(lines.back().number) + ")"});
  }

  for (auto& [id, samples] : by_machine) {
    std::sort(samples.begin(), samples.end(),
              [](const CpuSample& a, const CpuSample& b) { return a.offset_s < b.offset_s; });
    const std::uint64_t span = samples.back().offset_s - samples.front().offset_s + 1;
    const std::uint64_t missing = span - samples.size();
    if (static_cast<double>(missing) > gap_threshold * static_cast<double>(span)) {
      std::ostringstream detail;
      detail << missing << " of " << span << " seconds missing";
      result.warnings.push_back({IngestWarning::Kind::kGapExceedsThreshold, id, detail.str()});
    }
    result.traces.push_back(MachineTrace{id, std::move(samples)});
  }
  return result;
}

void WriteTraceCsv(std::ostream& out, std::span<const MachineTrace> traces) {
  out << kTraceCsvHeader << '\n';
  for (const MachineTrace& trace : traces) {
    for (const CpuSample& s : trace.samples) {
      out << trace.machine_id << ',' << s.offset_s << ','
          << internal::FormatShortest(s.cpu_seconds) << '\n';
    }
  }
}

ClusterSpec ParseClusterSpec(std::istream& in) {
  const std::string text = ReadAll(in);
  bool terminated = true;
  std::vector<Machine> machines;
  std::set<std::string> ids;
  for (const Line& line : SplitLines(text, terminated)) {
    std::string_view body = line.text.substr(0, line.text.find('#'));
    const auto tokens = SplitWhitespace(body);
    if (tokens.empty()) continue;
    if (tokens.size() != 3 || !IsValidMachineId(tokens[0])) {
      throw Error(ErrorKind::kMalformedEntry, std::string(line.text), line.number);
    }
    Machine m;
    m.machine_id = std::string(tokens[0]);
    if (!internal::ParseNumber(tokens[1], m.clock_hz) || !std::isfinite(m.clock_hz)) {
      throw Error(ErrorKind::kMalformedEntry, std::string(line.text), line.number);
    }
    if (!(m.clock_hz > 0.0)) {
      throw Error(ErrorKind::kNonPositiveClock, m.machine_id, line.number);
    }
    if (!internal::ParseNumber(tokens[2], m.cores) || m.cores < 1) {
      throw Error(ErrorKind::kMalformedEntry, std::string(line.text), line.number);
    }
    if (!ids.insert(m.machine_id).second) {
      throw Error(ErrorKind::kDuplicateMachineId, m.machine_id, line.number);
    }
    machines.push_back(std::move(m));
  }
  if (machines.empty()) {
    throw Error(ErrorKind::kMalformedEntry, "cluster spec lists no machines");
  }
  return ClusterSpec(std::move(machines));
}

void WriteClusterSpec(std::ostream& out, const ClusterSpec& cluster) {
  for (const Machine& m : cluster.machines()) {
    out << m.machine_id << ' ' << internal::FormatShortest(m.clock_hz) << ' '
        << m.cores << '\n';
  }
}

}  // namespace cyclecast
