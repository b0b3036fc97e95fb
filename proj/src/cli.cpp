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

#include "cyclecast/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cyclecast/cycles.hpp"
#include "cyclecast/error.hpp"
#include "cyclecast/ingest.hpp"
#include "cyclecast/metrics.hpp"
#include "cyclecast/regression.hpp"
#include "cyclecast/scaling.hpp"
#include "cyclecast/store.hpp"
#include "cyclecast/synth.hpp"
#include "numeric_util.hpp"

namespace cyclecast {

namespace {

namespace fs = std::filesystem;

// Bad flag values that CLI11 cannot catch on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  std::uint32_t lo = 4;
  std::uint32_t hi = 32;
  std::uint32_t step = 4;

  std::vector<std::uint32_t> Values() const {
    std::vector<std::uint32_t> v;
    for (std::uint64_t x = lo; x <= hi; x += step) v.push_back(static_cast<std::uint32_t>(x));
    return v;
  }
};

Grid ParseGrid(const std::string& text) {
  std::vector<std::uint32_t> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(':', start);
    std::uint32_t v = 0;
    if (!internal::ParseNumber(std::string_view(text).substr(start, end - start), v)) {
      throw UsageError("grid must look like lo:hi:step, got '" + text + "'");
    }
    parts.push_back(v);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (parts.size() != 3 || parts[0] < 1 || parts[1] < parts[0] || parts[2] < 1) {
    throw UsageError("grid must satisfy 1 <= lo <= hi and step >= 1, got '" + text + "'");
  }
  return {parts[0], parts[1], parts[2]};
}

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoFailure, path.string() + ": cannot open");
  return in;
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoFailure, path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(ErrorKind::kIoFailure, path.string() + ": write failed");
}

std::string Percent(double fraction) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << fraction * 100.0 << '%';
  return s.str();
}

std::string OptionalNumber(const std::optional<double>& v) {
  return v ? internal::FormatShortest(*v) : std::string("undefined");
}

// Scales a configuration prediction to `input_bytes` when the model has a
// scaling law and the size differs from the training size.
struct SizedPrediction {
  double cycles = 0.0;
  bool clamped = false;
  bool scaled = false;
};

SizedPrediction PredictAtSize(const ModelRecord& model, const JobConfig& config) {
  const Prediction base = Predict(model.coefficients, config);
  SizedPrediction out{base.cycles, base.clamped, false};
  if (config.input_bytes != model.ref_input_bytes && model.scaling) {
    const Prediction sized = ScalePrediction(base.cycles, *model.scaling, config.input_bytes);
    out.cycles = sized.cycles;
    out.clamped = out.clamped || sized.clamped;
    out.scaled = true;
  }
  return out;
}

// ---- subcommands ---------------------------------------------------------

struct IngestArgs {
  std::string traces, cluster, app, out, run_id;
  std::uint32_t mappers = 0, reducers = 0;
  std::uint64_t input_bytes = 0;
  double gap_threshold = kDefaultGapThreshold;
};

int DoIngest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  auto cluster_in = OpenInput(a.cluster);
  const ClusterSpec cluster = ParseClusterSpec(cluster_in);
  auto traces_in = OpenInput(a.traces);
  const TraceParseResult parsed = ParseTraceCsv(traces_in, a.gap_threshold);
  for (const IngestWarning& w : parsed.warnings) {
    const char* kind = w.kind == IngestWarning::Kind::kGapExceedsThreshold ? "gap" : "truncated";
    err << "warning: " << kind << " in trace of " << w.machine_id << ": " << w.detail << '\n';
  }
  JobRun run;
  run.app = a.app;
  run.run_id = a.run_id.empty() ? fs::path(a.traces).stem().string() : a.run_id;
  run.config = JobConfig{a.mappers, a.reducers, a.input_bytes};
  run.total_cycles = TotalCpuCycles(parsed.traces, cluster);
  const std::vector<JobRun> one{run};
  AppendRuns(a.out, one);
  out << RunToJsonLine(run) << '\n';
  return kExitOk;
}

struct FitArgs {
  std::string runs, app, out;
  std::size_t min_k = kMinTrainingRows;
  std::optional<std::uint64_t> input_bytes;
};

int DoFit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  if (a.min_k < kMinTrainingRows) throw UsageError("--min-k must be at least 5");
  std::vector<JobRun> runs = LoadRuns(a.runs, a.app);
  if (runs.empty()) throw Error(ErrorKind::kEmptyInput, "no runs for app '" + a.app + "'");

  std::set<std::uint64_t> sizes;
  for (const JobRun& r : runs) sizes.insert(r.config.input_bytes);
  std::uint64_t size = *sizes.begin();
  if (a.input_bytes) {
    size = *a.input_bytes;
    std::erase_if(runs, [&](const JobRun& r) { return r.config.input_bytes != size; });
    if (runs.empty()) {
      throw Error(ErrorKind::kEmptyInput, "no runs at input size " + std::to_string(size));
    }
  } else if (sizes.size() > 1) {
    throw Error(ErrorKind::kInvalidValue,
                "runs span several input sizes; choose one with --input-bytes");
  }

  const std::vector<JobProfile> profiles = AggregateRepetitions(runs);
  if (profiles.size() < a.min_k) {
    throw Error(ErrorKind::kRankDeficient, std::to_string(profiles.size()) +
                                               " distinct configurations, need " +
                                               std::to_string(a.min_k));
  }
  const TrainingSet set = BuildDesignMatrix(profiles);
  ModelRecord record;
  record.app = a.app;
  record.coefficients = FitLeastSquares(set.x, set.y);
  record.ref_input_bytes = size;
  SaveModel(a.out, record);

  err << "fitted " << profiles.size() << " profiles from " << runs.size() << " runs\n";
  out << "condition_estimate " << internal::FormatShortest(record.coefficients.condition_estimate)
      << '\n'
      << "training_residual " << internal::FormatShortest(record.coefficients.training_residual)
      << '\n';
  return kExitOk;
}

struct PredictArgs {
  std::string model, out;
  std::uint32_t mappers = 0, reducers = 0;
  std::optional<std::uint64_t> input_bytes;
};

int DoPredict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const ModelRecord model = LoadModel(a.model);
  JobConfig config{a.mappers, a.reducers, a.input_bytes.value_or(model.ref_input_bytes)};
  if (config.input_bytes != model.ref_input_bytes && !model.scaling) {
    err << "warning: model has no scaling section; predicting at its reference size\n";
  }
  const SizedPrediction p = PredictAtSize(model, config);
  if (p.clamped) err << "warning: polynomial is negative here; prediction clamped to 0\n";
  std::string json = "{\"mappers\":" + std::to_string(config.mappers) +
                     ",\"reducers\":" + std::to_string(config.reducers) +
                     ",\"input_bytes\":" + std::to_string(config.input_bytes) +
                     ",\"predicted_cycles\":" + internal::FormatFull(p.cycles) +
                     ",\"clamped\":" + (p.clamped ? "true" : "false") +
                     ",\"scaled\":" + (p.scaled ? "true" : "false") + "}\n";
  if (a.out.empty()) {
    out << json;
  } else {
    WriteTextFile(a.out, json);
  }
  return kExitOk;
}

std::set<std::string> ReadHoldoutList(const fs::path& path) {
  auto in = OpenInput(path);
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    ids.insert(line.substr(first, last - first + 1));
  }
  return ids;
}

struct EvaluateArgs {
  std::string model, runs, app, holdout_list, out;
};

int DoEvaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const ModelRecord model = LoadModel(a.model);
  std::vector<JobRun> runs = LoadRuns(a.runs, a.app);
  if (!a.holdout_list.empty()) {
    const std::set<std::string> ids = ReadHoldoutList(a.holdout_list);
    std::set<std::string> found;
    std::erase_if(runs, [&](const JobRun& r) {
      if (!ids.contains(r.run_id)) return true;
      found.insert(r.run_id);
      return false;
    });
    for (const std::string& id : ids) {
      if (!found.contains(id)) throw Error(ErrorKind::kInvalidValue, "holdout run '" + id + "' not found");
    }
  }

  std::vector<double> actual, predicted;
  std::size_t clamped = 0;
  for (const JobRun& r : runs) {
    if (r.config.input_bytes != model.ref_input_bytes && !model.scaling) {
      throw Error(ErrorKind::kInvalidValue,
                  "run '" + r.run_id + "' is at a different input size and the model has no "
                  "scaling section");
    }
    const SizedPrediction p = PredictAtSize(model, r.config);
    clamped += p.clamped;
    actual.push_back(r.total_cycles);
    predicted.push_back(p.cycles);
  }
  if (clamped) err << "warning: " << clamped << " predictions clamped to 0\n";

  const EvaluationReport report = Evaluate(actual, predicted);
  const std::string json = ReportToJson(report);
  std::ostream* table = &err;
  if (a.out.empty()) {
    out << json;
  } else {
    WriteTextFile(a.out, json);
    table = &out;
  }
  *table << "n " << report.n << '\n'
         << "MAPE " << Percent(report.mape) << '\n'
         << "PRED(25) " << Percent(report.pred25) << '\n'
         << "RMSE " << internal::FormatShortest(report.rmse) << " ("
         << Percent(report.rmse_norm) << " of mean)\n"
         << "R2 (prediction spread) " << OptionalNumber(report.r2_paper) << '\n'
         << "R2 (standard) " << OptionalNumber(report.r2_standard) << '\n';
  return kExitOk;
}

struct ScaleFitArgs {
  std::string runs, app, model;
};

int DoScaleFit(const ScaleFitArgs& a, std::ostream& out, std::ostream&) {
  ModelRecord model = LoadModel(a.model);
  const std::vector<JobRun> runs = LoadRuns(a.runs, a.app);
  if (runs.empty()) throw Error(ErrorKind::kEmptyInput, "no runs for app '" + a.app + "'");
  const std::vector<SizePoint> points = SizePointsFromRuns(runs);
  model.scaling = FitScaling(points, model.ref_input_bytes);
  SaveModel(a.model, model);
  out << "slope " << internal::FormatShortest(model.scaling->slope) << '\n'
      << "intercept " << internal::FormatShortest(model.scaling->intercept) << '\n'
      << "points " << points.size() << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string truth, grid = "4:32:4", out, emit_traces, cluster, app;
  std::uint32_t reps = 10;
  double noise = 0.02;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> input_bytes;
};

std::uint64_t ResolveSeed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CYCLECAST_SEED")) {
    std::uint64_t seed = 0;
    if (!internal::ParseNumber(std::string_view(env), seed)) {
      throw UsageError(std::string("CYCLECAST_SEED is not an unsigned integer: ") + env);
    }
    return seed;
  }
  return 0;
}

int DoSimulate(const SimulateArgs& a, std::ostream&, std::ostream& err) {
  if (!a.emit_traces.empty() && a.cluster.empty()) {
    throw UsageError("--emit-traces needs --cluster");
  }
  const Grid grid = ParseGrid(a.grid);
  const ModelRecord truth = LoadModel(a.truth);

  SynthSpec spec;
  spec.truth = truth.coefficients;
  spec.grid_mappers = grid.Values();
  spec.grid_reducers = grid.Values();
  spec.repetitions = a.reps;
  spec.noise_rel_sigma = a.noise;
  spec.seed = ResolveSeed(a.seed);
  spec.app = !a.app.empty() ? a.app : (!truth.app.empty() ? truth.app : "synthetic");
  spec.input_bytes = a.input_bytes.value_or(truth.ref_input_bytes);
  const std::vector<JobRun> runs = GenerateProfiles(spec);
  WriteRuns(a.out, runs);
  err << "wrote " << runs.size() << " runs to " << a.out << '\n';

  if (!a.emit_traces.empty()) {
    auto cluster_in = OpenInput(a.cluster);
    const ClusterSpec cluster = ParseClusterSpec(cluster_in);
    fs::create_directories(a.emit_traces);
    for (const JobRun& run : runs) {
      const std::vector<MachineTrace> traces = GenerateTrace(run, cluster, spec.seed);
      std::ostringstream csv;
      WriteTraceCsv(csv, traces);
      WriteTextFile(fs::path(a.emit_traces) / (run.run_id + ".csv"), csv.str());
    }
    err << "wrote " << runs.size() << " trace files to " << a.emit_traces << '\n';
  }
  return kExitOk;
}

struct ReportArgs {
  std::string model, grid = "4:32:4", out;
};

int DoReport(const ReportArgs& a, std::ostream&, std::ostream& err) {
  const Grid grid = ParseGrid(a.grid);
  const ModelRecord model = LoadModel(a.model);
  fs::create_directories(a.out);
  std::string tsv = "mappers\treducers\tpredicted_cycles\n";
  for (std::uint32_t m : grid.Values()) {
    for (std::uint32_t r : grid.Values()) {
      const Prediction p = Predict(model.coefficients, JobConfig{m, r, model.ref_input_bytes});
      tsv += std::to_string(m) + '\t' + std::to_string(r) + '\t' +
             internal::FormatFull(p.cycles) + '\n';
    }
  }
  const fs::path path = fs::path(a.out) / "surface.tsv";
  WriteTextFile(path, tsv);
  err << "wrote " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Total CPU cycle profiling and prediction for MapReduce jobs", "cyclecast"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Turn one job's CPU trace into a stored run");
  ingest_cmd->add_option("--traces", ingest.traces, "Trace CSV")->required();
  ingest_cmd->add_option("--cluster", ingest.cluster, "Cluster spec")->required();
  ingest_cmd->add_option("--app", ingest.app, "Application name")->required();
  ingest_cmd->add_option("--mappers", ingest.mappers)->required()->check(CLI::PositiveNumber);
  ingest_cmd->add_option("--reducers", ingest.reducers)->required()->check(CLI::PositiveNumber);
  ingest_cmd->add_option("--input-bytes", ingest.input_bytes)->required()->check(CLI::PositiveNumber);
  ingest_cmd->add_option("--out", ingest.out, "Runs file to append to")->required();
  ingest_cmd->add_option("--run-id", ingest.run_id, "Defaults to the trace file stem");
  ingest_cmd->add_option("--gap-threshold", ingest.gap_threshold,
                         "Warn when missing seconds exceed this fraction of a trace")
      ->check(CLI::Range(0.0, 1.0));

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the mapper/reducer model for one app");
  fit_cmd->add_option("--runs", fit.runs)->required();
  fit_cmd->add_option("--app", fit.app)->required();
  fit_cmd->add_option("--out", fit.out, "Model file")->required();
  fit_cmd->add_option("--min-k", fit.min_k, "Minimum distinct configurations");
  fit_cmd->add_option("--input-bytes", fit.input_bytes, "Train on runs at this input size");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Predict total cycles for a configuration");
  predict_cmd->add_option("--model", predict.model)->required();
  predict_cmd->add_option("--mappers", predict.mappers)->required()->check(CLI::PositiveNumber);
  predict_cmd->add_option("--reducers", predict.reducers)->required()->check(CLI::PositiveNumber);
  predict_cmd->add_option("--input-bytes", predict.input_bytes)->check(CLI::PositiveNumber);
  predict_cmd->add_option("--out", predict.out, "Write the JSON here instead of stdout");

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a model against stored runs");
  evaluate_cmd->add_option("--model", evaluate.model)->required();
  evaluate_cmd->add_option("--runs", evaluate.runs)->required();
  evaluate_cmd->add_option("--app", evaluate.app)->required();
  evaluate_cmd->add_option("--holdout-list", evaluate.holdout_list, "run_ids to score, one per line");
  evaluate_cmd->add_option("--out", evaluate.out, "Write the JSON report here instead of stdout");

  ScaleFitArgs scale_fit;
  auto* scale_cmd = app.add_subcommand("scale-fit", "Fit the input-size law into a model file");
  scale_cmd->add_option("--runs", scale_fit.runs)->required();
  scale_cmd->add_option("--app", scale_fit.app)->required();
  scale_cmd->add_option("--model", scale_fit.model)->required();

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate synthetic runs from a truth model");
  simulate_cmd->add_option("--truth", simulate.truth, "Model file holding the true surface")->required();
  simulate_cmd->add_option("--grid", simulate.grid, "lo:hi:step for mappers and reducers");
  simulate_cmd->add_option("--reps", simulate.reps)->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--noise", simulate.noise, "Relative std. dev. of run noise")
      ->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--seed", simulate.seed, "Falls back to $CYCLECAST_SEED, then 0");
  simulate_cmd->add_option("--out", simulate.out, "Runs file (replaced)")->required();
  simulate_cmd->add_option("--emit-traces", simulate.emit_traces, "Directory for trace CSVs");
  simulate_cmd->add_option("--cluster", simulate.cluster, "Cluster spec for trace emission");
  simulate_cmd->add_option("--app", simulate.app, "Defaults to the truth model's app");
  simulate_cmd->add_option("--input-bytes", simulate.input_bytes)->check(CLI::PositiveNumber);

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Write the predicted surface as TSV");
  report_cmd->add_option("--model", report.model)->required();
  report_cmd->add_option("--grid", report.grid, "lo:hi:step");
  report_cmd->add_option("--out", report.out, "Output directory")->required();

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("cyclecast");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest_cmd) return DoIngest(ingest, out, err);
    if (*fit_cmd) return DoFit(fit, out, err);
    if (*predict_cmd) return DoPredict(predict, out, err);
    if (*evaluate_cmd) return DoEvaluate(evaluate, out, err);
    if (*scale_cmd) return DoScaleFit(scale_fit, out, err);
    if (*simulate_cmd) return DoSimulate(simulate, out, err);
    if (*report_cmd) return DoReport(report, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace cyclecast
