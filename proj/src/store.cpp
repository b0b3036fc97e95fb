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

#include "cyclecast/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "cyclecast/error.hpp"
#include "numeric_util.hpp"

namespace cyclecast {

namespace {

using nlohmann::json;

std::string Quote(const std::string& s) { return json(s).dump(); }

std::string IoMessage(const std::filesystem::path& path, const char* what) {
  return path.string() + ": " + what + ": " + std::strerror(errno);
}

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;

  int get() const { return fd_; }

 private:
  int fd_;
};

void WriteFully(int fd, const std::string& data, const std::filesystem::path& path) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorKind::kIoFailure, IoMessage(path, "write"));
    }
    done += static_cast<std::size_t>(n);
  }
}

void WriteFileAtomically(const std::filesystem::path& path, const std::string& data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    FileDescriptor fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
    if (fd.get() < 0) throw Error(ErrorKind::kIoFailure, IoMessage(tmp, "open"));
    WriteFully(fd.get(), data, tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::kIoFailure, path.string() + ": rename: " + ec.message());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoFailure, path.string() + ": cannot open");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

template <typename T>
T Field(const json& obj, const char* key, std::optional<std::size_t> line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorKind::kCorruptRecord, std::string("missing '") + key + "'", line);
  }
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw Error(ErrorKind::kCorruptRecord, std::string(key), line);
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw Error(ErrorKind::kCorruptRecord, std::string(key), line);
      if (it->is_number_unsigned() ? false : it->template get<std::int64_t>() < 0) {
        throw Error(ErrorKind::kCorruptRecord, std::string(key) + " is negative", line);
      }
    } else {
      if (!it->is_number()) throw Error(ErrorKind::kCorruptRecord, std::string(key), line);
    }
    return it->template get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kCorruptRecord, std::string(key) + ": " + e.what(), line);
  }
}

JobRun ParseRunLine(const std::string& text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kCorruptRecord, e.what(), line);
  }
  if (!obj.is_object()) throw Error(ErrorKind::kCorruptRecord, "not an object", line);
  const auto version = Field<std::int64_t>(obj, "schema_version", line);
  if (version != kRunsSchemaVersion) {
    throw Error(ErrorKind::kUnsupportedSchema, "schema_version " + std::to_string(version), line);
  }
  if (obj.size() != 7) throw Error(ErrorKind::kCorruptRecord, "unexpected keys", line);

  JobRun run;
  run.app = Field<std::string>(obj, "app", line);
  run.run_id = Field<std::string>(obj, "run_id", line);
  const auto mappers = Field<std::uint64_t>(obj, "mappers", line);
  const auto reducers = Field<std::uint64_t>(obj, "reducers", line);
  if (mappers > UINT32_MAX || reducers > UINT32_MAX) {
    throw Error(ErrorKind::kCorruptRecord, "task count out of range", line);
  }
  run.config.mappers = static_cast<std::uint32_t>(mappers);
  run.config.reducers = static_cast<std::uint32_t>(reducers);
  run.config.input_bytes = Field<std::uint64_t>(obj, "input_bytes", line);
  run.total_cycles = Field<double>(obj, "total_cycles", line);
  try {
    Validate(run);
  } catch (const Error& e) {
    throw Error(ErrorKind::kCorruptRecord, e.what(), line);
  }
  return run;
}

}  // namespace

std::string RunToJsonLine(const JobRun& run) {
  Validate(run);
  std::string line = "{\"schema_version\":" + std::to_string(kRunsSchemaVersion);
  line += ",\"app\":" + Quote(run.app);
  line += ",\"run_id\":" + Quote(run.run_id);
  line += ",\"mappers\":" + std::to_string(run.config.mappers);
  line += ",\"reducers\":" + std::to_string(run.config.reducers);
  line += ",\"input_bytes\":" + std::to_string(run.config.input_bytes);
  line += ",\"total_cycles\":" + internal::FormatFull(run.total_cycles);
  line += "}";
  return line;
}

std::size_t AppendRuns(const std::filesystem::path& path, std::span<const JobRun> runs) {
  if (runs.empty()) return 0;
  std::string buffer;
  for (const JobRun& run : runs) buffer += RunToJsonLine(run) + '\n';

  FileDescriptor fd(::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644));
  if (fd.get() < 0) throw Error(ErrorKind::kIoFailure, IoMessage(path, "open"));
  while (::flock(fd.get(), LOCK_EX) != 0) {
    if (errno != EINTR) throw Error(ErrorKind::kIoFailure, IoMessage(path, "flock"));
  }
  WriteFully(fd.get(), buffer, path);
  ::flock(fd.get(), LOCK_UN);
  return runs.size();
}

void WriteRuns(const std::filesystem::path& path, std::span<const JobRun> runs) {
  std::string buffer;
  for (const JobRun& run : runs) buffer += RunToJsonLine(run) + '\n';
  WriteFileAtomically(path, buffer);
}

std::vector<JobRun> LoadRuns(const std::filesystem::path& path,
                             const std::optional<std::string>& app_filter) {
  const std::string text = ReadFile(path);
  std::vector<JobRun> runs;
  std::size_t start = 0;
  std::size_t line = 0;
  while (start < text.size()) {
    ++line;
    std::size_t end = text.find('\n', start);
    const bool terminated = end != std::string::npos;
    if (!terminated) end = text.size();
    const std::string record = text.substr(start, end - start);
    start = end + 1;
    if (record.empty()) continue;
    JobRun run;
    try {
      run = ParseRunLine(record, line);
    } catch (const Error&) {
      if (!terminated) break;
      throw;
    }
    if (!app_filter || run.app == *app_filter) runs.push_back(std::move(run));
  }
  return runs;
}

std::string ModelToJson(const ModelRecord& record) {
  Validate(record.coefficients);
  std::string out = "{\"basis\":" + Quote(record.coefficients.basis_tag);
  out += ",\"app\":" + Quote(record.app);
  out += ",\"a\":[";
  for (std::size_t i = 0; i < kBasisSize; ++i) {
    if (i) out += ',';
    out += internal::FormatFull(record.coefficients.a[i]);
  }
  out += "],\"condition\":" + internal::FormatFull(record.coefficients.condition_estimate);
  out += ",\"residual\":" + internal::FormatFull(record.coefficients.training_residual);
  out += ",\"ref_input_bytes\":" + std::to_string(record.ref_input_bytes);
  if (record.scaling) {
    Validate(*record.scaling);
    out += ",\"scaling\":{\"slope\":" + internal::FormatFull(record.scaling->slope);
    out += ",\"intercept\":" + internal::FormatFull(record.scaling->intercept);
    out += ",\"ref_bytes\":" + std::to_string(record.scaling->ref_bytes) + "}";
  }
  out += "}\n";
  return out;
}

ModelRecord ModelFromJson(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kCorruptRecord, e.what());
  }
  if (!obj.is_object()) throw Error(ErrorKind::kCorruptRecord, "model is not an object");
  constexpr std::optional<std::size_t> kNoLine;

  ModelRecord record;
  record.coefficients.basis_tag = Field<std::string>(obj, "basis", kNoLine);
  if (record.coefficients.basis_tag != kBasisTag) {
    throw Error(ErrorKind::kCorruptRecord, "unknown basis '" + record.coefficients.basis_tag + "'");
  }
  record.app = Field<std::string>(obj, "app", kNoLine);
  auto a = obj.find("a");
  if (a == obj.end() || !a->is_array() || a->size() != kBasisSize) {
    throw Error(ErrorKind::kCorruptRecord, "'a' must hold exactly 5 coefficients");
  }
  for (std::size_t i = 0; i < kBasisSize; ++i) {
    if (!(*a)[i].is_number()) throw Error(ErrorKind::kCorruptRecord, "non-numeric coefficient");
    record.coefficients.a[i] = (*a)[i].get<double>();
  }
  record.coefficients.condition_estimate = Field<double>(obj, "condition", kNoLine);
  record.coefficients.training_residual = Field<double>(obj, "residual", kNoLine);
  record.ref_input_bytes = Field<std::uint64_t>(obj, "ref_input_bytes", kNoLine);
  if (auto s = obj.find("scaling"); s != obj.end() && !s->is_null()) {
    if (!s->is_object()) throw Error(ErrorKind::kCorruptRecord, "'scaling' must be an object");
    ScalingModel scaling;
    scaling.slope = Field<double>(*s, "slope", kNoLine);
    scaling.intercept = Field<double>(*s, "intercept", kNoLine);
    scaling.ref_bytes = Field<std::uint64_t>(*s, "ref_bytes", kNoLine);
    record.scaling = scaling;
  }
  try {
    Validate(record.coefficients);
    if (record.ref_input_bytes < 1) throw Error(ErrorKind::kInvalidValue, "ref_input_bytes");
    if (record.scaling) {
      Validate(*record.scaling);
      if (record.scaling->ref_bytes != record.ref_input_bytes) {
        throw Error(ErrorKind::kInvalidValue, "scaling ref_bytes differs from ref_input_bytes");
      }
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::kCorruptRecord, e.what());
  }
  return record;
}

void SaveModel(const std::filesystem::path& path, const ModelRecord& record) {
  WriteFileAtomically(path, ModelToJson(record));
}

ModelRecord LoadModel(const std::filesystem::path& path) {
  return ModelFromJson(ReadFile(path));
}

std::string ReportToJson(const EvaluationReport& report) {
  auto opt = [](const std::optional<double>& v) {
    return v ? internal::FormatFull(*v) : std::string("null");
  };
  std::string out = "{\"n\":" + std::to_string(report.n);
  out += ",\"mape\":" + internal::FormatFull(report.mape);
  out += ",\"pred25\":" + internal::FormatFull(report.pred25);
  out += ",\"rmse\":" + internal::FormatFull(report.rmse);
  out += ",\"rmse_norm\":" +
         opt(std::isfinite(report.rmse_norm) ? std::optional<double>(report.rmse_norm) : std::nullopt);
  out += ",\"r2_paper\":" + opt(report.r2_paper);
  out += ",\"r2_standard\":" + opt(report.r2_standard);
  out += "}\n";
  return out;
}

}  // namespace cyclecast
