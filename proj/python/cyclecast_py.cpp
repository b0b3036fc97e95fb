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

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cyclecast/cli.hpp"
#include "cyclecast/cycles.hpp"
#include "cyclecast/error.hpp"
#include "cyclecast/ingest.hpp"
#include "cyclecast/metrics.hpp"
#include "cyclecast/regression.hpp"
#include "cyclecast/scaling.hpp"
#include "cyclecast/store.hpp"
#include "cyclecast/synth.hpp"

namespace py = pybind11;
using namespace cyclecast;

namespace {

TrainingSet TrainingFromConfigs(const std::vector<JobConfig>& configs,
                                const std::vector<double>& targets) {
  TrainingSet set{DesignMatrixFor(configs), TargetVector{targets}};
  return set;
}

}  // namespace

PYBIND11_MODULE(_cyclecast, m) {
  m.doc() = "Total CPU cycle profiling and prediction for MapReduce jobs";
  m.attr("__version__") = "0.1.0";

  static py::exception<Error> error_type(m, "CyclecastError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(error_type)(e.what());
      err.attr("kind") = std::string(ErrorKindName(e.kind()));
      PyErr_SetObject(error_type.ptr(), err.ptr());
    }
  });

  py::class_<CpuSample>(m, "CpuSample")
      .def(py::init<std::uint64_t, double>(), py::arg("offset_s"), py::arg("cpu_seconds"))
      .def_readwrite("offset_s", &CpuSample::offset_s)
      .def_readwrite("cpu_seconds", &CpuSample::cpu_seconds)
      .def(py::self == py::self);

  py::class_<MachineTrace>(m, "MachineTrace")
      .def(py::init<std::string, std::vector<CpuSample>>(), py::arg("machine_id"),
           py::arg("samples"))
      .def_readwrite("machine_id", &MachineTrace::machine_id)
      .def_readwrite("samples", &MachineTrace::samples)
      .def(py::self == py::self);

  py::class_<Machine>(m, "Machine")
      .def(py::init<std::string, double, std::uint32_t>(), py::arg("machine_id"),
           py::arg("clock_hz"), py::arg("cores") = 1)
      .def_readwrite("machine_id", &Machine::machine_id)
      .def_readwrite("clock_hz", &Machine::clock_hz)
      .def_readwrite("cores", &Machine::cores);

  py::class_<ClusterSpec>(m, "ClusterSpec")
      .def(py::init<std::vector<Machine>>(), py::arg("machines"))
      .def_property_readonly("machines", &ClusterSpec::machines)
      .def("__len__", &ClusterSpec::size);

  py::class_<JobConfig>(m, "JobConfig")
      .def(py::init([](std::uint32_t mappers, std::uint32_t reducers, std::uint64_t input_bytes) {
             JobConfig c{mappers, reducers, input_bytes};
             Validate(c);
             return c;
           }),
           py::arg("mappers"), py::arg("reducers"), py::arg("input_bytes") = kDefaultInputBytes)
      .def_readwrite("mappers", &JobConfig::mappers)
      .def_readwrite("reducers", &JobConfig::reducers)
      .def_readwrite("input_bytes", &JobConfig::input_bytes)
      .def(py::self == py::self)
      .def("__repr__", [](const JobConfig& c) {
        return "JobConfig(mappers=" + std::to_string(c.mappers) + ", reducers=" +
               std::to_string(c.reducers) + ", input_bytes=" + std::to_string(c.input_bytes) + ")";
      });

  py::class_<JobRun>(m, "JobRun")
      .def(py::init<std::string, std::string, JobConfig, double>(), py::arg("app"),
           py::arg("run_id"), py::arg("config"), py::arg("total_cycles"))
      .def_readwrite("app", &JobRun::app)
      .def_readwrite("run_id", &JobRun::run_id)
      .def_readwrite("config", &JobRun::config)
      .def_readwrite("total_cycles", &JobRun::total_cycles)
      .def(py::self == py::self);

  py::class_<JobProfile>(m, "JobProfile")
      .def(py::init<std::string, JobConfig, double, std::uint32_t>(), py::arg("app"),
           py::arg("config"), py::arg("mean_cycles"), py::arg("repetitions") = 1)
      .def_readwrite("app", &JobProfile::app)
      .def_readwrite("config", &JobProfile::config)
      .def_readwrite("mean_cycles", &JobProfile::mean_cycles)
      .def_readwrite("repetitions", &JobProfile::repetitions);

  py::class_<ModelCoefficients>(m, "ModelCoefficients")
      .def(py::init([](std::array<double, kBasisSize> a) {
             ModelCoefficients mc;
             mc.a = a;
             return mc;
           }),
           py::arg("a"))
      .def_readwrite("a", &ModelCoefficients::a)
      .def_readonly("basis_tag", &ModelCoefficients::basis_tag)
      .def_readwrite("condition_estimate", &ModelCoefficients::condition_estimate)
      .def_readwrite("training_residual", &ModelCoefficients::training_residual);

  py::class_<ScalingModel>(m, "ScalingModel")
      .def(py::init<double, double, std::uint64_t>(), py::arg("slope"), py::arg("intercept"),
           py::arg("ref_bytes"))
      .def_readwrite("slope", &ScalingModel::slope)
      .def_readwrite("intercept", &ScalingModel::intercept)
      .def_readwrite("ref_bytes", &ScalingModel::ref_bytes);

  py::class_<EvaluationReport>(m, "EvaluationReport")
      .def_readonly("n", &EvaluationReport::n)
      .def_readonly("mape", &EvaluationReport::mape)
      .def_readonly("pred25", &EvaluationReport::pred25)
      .def_readonly("rmse", &EvaluationReport::rmse)
      .def_readonly("rmse_norm", &EvaluationReport::rmse_norm)
      .def_readonly("r2_paper", &EvaluationReport::r2_paper)
      .def_readonly("r2_standard", &EvaluationReport::r2_standard)
      .def("to_json", &ReportToJson);

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("truth", &SynthSpec::truth)
      .def_readwrite("grid_mappers", &SynthSpec::grid_mappers)
      .def_readwrite("grid_reducers", &SynthSpec::grid_reducers)
      .def_readwrite("repetitions", &SynthSpec::repetitions)
      .def_readwrite("noise_rel_sigma", &SynthSpec::noise_rel_sigma)
      .def_readwrite("seed", &SynthSpec::seed)
      .def_readwrite("app", &SynthSpec::app)
      .def_readwrite("input_bytes", &SynthSpec::input_bytes);

  py::class_<ModelRecord>(m, "ModelRecord")
      .def(py::init<>())
      .def_readwrite("app", &ModelRecord::app)
      .def_readwrite("coefficients", &ModelRecord::coefficients)
      .def_readwrite("ref_input_bytes", &ModelRecord::ref_input_bytes)
      .def_readwrite("scaling", &ModelRecord::scaling);

  // cycle accounting and ingest
  m.def("total_cpu_cycles",
        [](const std::vector<MachineTrace>& traces, const ClusterSpec& cluster) {
          return TotalCpuCycles(traces, cluster);
        },
        py::arg("traces"), py::arg("cluster"));
  m.def("aggregate_repetitions",
        [](const std::vector<JobRun>& runs) { return AggregateRepetitions(runs); },
        py::arg("runs"));
  m.def("parse_trace_csv",
        [](const std::string& text, double gap_threshold) {
          std::istringstream in(text);
          TraceParseResult r = ParseTraceCsv(in, gap_threshold);
          std::vector<std::pair<std::string, std::string>> warnings;
          for (const IngestWarning& w : r.warnings) {
            warnings.emplace_back(w.machine_id, w.detail);
          }
          return py::make_tuple(r.traces, warnings);
        },
        py::arg("text"), py::arg("gap_threshold") = kDefaultGapThreshold);
  m.def("parse_cluster_spec",
        [](const std::string& text) {
          std::istringstream in(text);
          return ParseClusterSpec(in);
        },
        py::arg("text"));

  // regression
  m.def("design_row", &DesignRowFor, py::arg("config"));
  m.def("fit_least_squares",
        [](const std::vector<JobConfig>& configs, const std::vector<double>& targets) {
          const TrainingSet set = TrainingFromConfigs(configs, targets);
          return FitLeastSquares(set.x, set.y);
        },
        py::arg("configs"), py::arg("targets"));
  m.def("fit_profiles",
        [](const std::vector<JobProfile>& profiles) {
          const TrainingSet set = BuildDesignMatrix(profiles);
          return FitLeastSquares(set.x, set.y);
        },
        py::arg("profiles"));
  m.def("solve_normal_equations",
        [](const std::vector<JobConfig>& configs, const std::vector<double>& targets) {
          const TrainingSet set = TrainingFromConfigs(configs, targets);
          return SolveNormalEquations(set.x, set.y);
        },
        py::arg("configs"), py::arg("targets"));
  m.def("predict",
        [](const ModelCoefficients& model, const JobConfig& config) {
          const Prediction p = Predict(model, config);
          return py::make_tuple(p.cycles, p.clamped);
        },
        py::arg("model"), py::arg("config"));
  m.def("residual_norm",
        [](const ModelCoefficients& model, const std::vector<JobConfig>& configs,
           const std::vector<double>& targets) {
          const TrainingSet set = TrainingFromConfigs(configs, targets);
          return ResidualNorm(model, set.x, set.y);
        },
        py::arg("model"), py::arg("configs"), py::arg("targets"));

  // metrics
  using Vec = const std::vector<double>&;
  m.def("mape", [](Vec a, Vec p) { return Mape(a, p); }, py::arg("actual"), py::arg("predicted"));
  m.def("pred25", [](Vec a, Vec p, double t) { return Pred(a, p, t); }, py::arg("actual"),
        py::arg("predicted"), py::arg("threshold") = kPredThreshold);
  m.def("rmse", [](Vec a, Vec p) { return Rmse(a, p); }, py::arg("actual"), py::arg("predicted"));
  m.def("r2_paper", [](Vec a, Vec p) { return R2Paper(a, p); }, py::arg("actual"),
        py::arg("predicted"));
  m.def("r2_standard", [](Vec a, Vec p) { return R2Standard(a, p); }, py::arg("actual"),
        py::arg("predicted"));
  m.def("evaluate", [](Vec a, Vec p) { return Evaluate(a, p); }, py::arg("actual"),
        py::arg("predicted"));

  // scaling
  m.def("fit_scaling",
        [](const std::vector<std::pair<std::uint64_t, double>>& points, std::uint64_t ref_bytes) {
          std::vector<SizePoint> pts;
          for (const auto& [b, c] : points) pts.push_back({b, c});
          return FitScaling(pts, ref_bytes);
        },
        py::arg("points"), py::arg("ref_bytes"));
  m.def("scale_prediction",
        [](double base, const ScalingModel& model, std::uint64_t target) {
          const Prediction p = ScalePrediction(base, model, target);
          return py::make_tuple(p.cycles, p.clamped);
        },
        py::arg("base_cycles"), py::arg("model"), py::arg("target_bytes"));

  // synthetic data
  m.def("generate_profiles", &GenerateProfiles, py::arg("spec"));
  m.def("generate_trace", &GenerateTrace, py::arg("run"), py::arg("cluster"), py::arg("seed"));

  // store
  m.def("append_runs",
        [](const std::filesystem::path& path, const std::vector<JobRun>& runs) {
          return AppendRuns(path, runs);
        },
        py::arg("path"), py::arg("runs"));
  m.def("load_runs", &LoadRuns, py::arg("path"), py::arg("app_filter") = py::none());
  m.def("save_model", &SaveModel, py::arg("path"), py::arg("record"));
  m.def("load_model", &LoadModel, py::arg("path"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = RunCli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
