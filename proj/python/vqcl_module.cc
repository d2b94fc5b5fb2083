// Copyright 2026 The VQCL Authors.
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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "vqcl/ansatz.h"
#include "vqcl/cli.h"
#include "vqcl/data.h"
#include "vqcl/encoding.h"
#include "vqcl/errors.h"
#include "vqcl/explain.h"
#include "vqcl/gradients.h"
#include "vqcl/model.h"
#include "vqcl/statevector.h"

namespace py = pybind11;

namespace vqcl {
namespace {

std::vector<std::vector<double>> JacobianRows(const CircuitJacobian& jac) {
  std::vector<std::vector<double>> rows(jac.num_params(),
                                        std::vector<double>(jac.num_outputs()));
  for (std::size_t j = 0; j < jac.num_params(); ++j) {
    for (std::size_t k = 0; k < jac.num_outputs(); ++k) rows[j][k] = jac.at(j, k);
  }
  return rows;
}

AnsatzParams ParamsFromRows(const std::vector<std::vector<double>>& rows) {
  const int layers = static_cast<int>(rows.size());
  const int qubits = layers == 0 ? 0 : static_cast<int>(rows.front().size());
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != qubits) throw ShapeError("ragged angle matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return AnsatzParams(layers, qubits, std::move(flat));
}

std::vector<std::vector<double>> ParamsToRows(const AnsatzParams& p) {
  std::vector<std::vector<double>> rows;
  for (int l = 0; l < p.num_layers(); ++l) {
    rows.emplace_back(p.row(l).begin(), p.row(l).end());
  }
  return rows;
}

// Register the base class first.
void RegisterErrors(py::module_& m) {
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<EncodingError>(m, "EncodingError", base.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<CheckpointError>(m, "CheckpointError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
}

}  // namespace
}  // namespace vqcl

PYBIND11_MODULE(_vqcl, m) {
  using namespace vqcl;
  m.doc() = "Statevector variational quantum classifier";
  RegisterErrors(m);

  py::enum_<Axis>(m, "Axis")
      .value("X", Axis::kX)
      .value("Y", Axis::kY)
      .value("Z", Axis::kZ);

  py::class_<QuantumState>(m, "QuantumState")
      .def_property_readonly("num_qubits", &QuantumState::num_qubits)
      .def_property_readonly("amplitudes", [](const QuantumState& s) {
        return std::vector<Complex>(s.amplitudes().begin(), s.amplitudes().end());
      })
      .def("expect_z", &QuantumState::ExpectZ, py::arg("qubit"))
      .def("squared_norm", &QuantumState::SquaredNorm);

  m.def("zero_state", &ZeroState, py::arg("num_qubits"));
  m.def("load_amplitudes",
        [](const std::vector<double>& v) { return LoadAmplitudes(v); },
        py::arg("values"));
  m.def("apply_rotation", &ApplyRotation, py::arg("state"), py::arg("qubit"),
        py::arg("axis"), py::arg("theta"));
  m.def("apply_cnot", &ApplyCnot, py::arg("state"), py::arg("control"),
        py::arg("target"));
  m.def("expect_z", &ExpectZ, py::arg("state"), py::arg("qubit"));

  py::class_<EncodingConfig>(m, "EncodingConfig")
      .def(py::init([](std::size_t feature_dim, double pad_value) {
             EncodingConfig c{feature_dim, pad_value};
             c.Validate();
             return c;
           }),
           py::arg("feature_dim"), py::arg("pad_value") = kDefaultPadValue)
      .def_readonly("feature_dim", &EncodingConfig::feature_dim)
      .def_readonly("pad_value", &EncodingConfig::pad_value)
      .def_property_readonly("target_dim", &EncodingConfig::target_dim)
      .def_property_readonly("num_qubits", &EncodingConfig::num_qubits);

  m.def("pad_features",
        [](const std::vector<double>& x, const EncodingConfig& c) {
          return PadFeatures(x, c);
        },
        py::arg("x"), py::arg("cfg"));
  m.def("normalize", [](const std::vector<double>& x) { return Normalize(x); },
        py::arg("x"));
  m.def("amplitude_encode",
        [](const std::vector<double>& x, const EncodingConfig& c) {
          return AmplitudeEncode(x, c);
        },
        py::arg("x"), py::arg("cfg"));

  py::class_<AnsatzConfig>(m, "AnsatzConfig")
      .def(py::init([](int n, int layers, Axis axis) {
             AnsatzConfig c{n, layers, axis};
             c.Validate();
             return c;
           }),
           py::arg("num_qubits"), py::arg("num_layers") = 6,
           py::arg("axis") = Axis::kX)
      .def_readonly("num_qubits", &AnsatzConfig::num_qubits)
      .def_readonly("num_layers", &AnsatzConfig::num_layers)
      .def_readonly("rotation_axis", &AnsatzConfig::rotation_axis);

  m.def("init_params",
        [](const AnsatzConfig& c, std::uint64_t seed) {
          return ParamsToRows(InitParams(c, seed));
        },
        py::arg("cfg"), py::arg("seed"));
  m.def("circuit_forward",
        [](const std::vector<double>& x, const std::vector<std::vector<double>>& angles,
           const AnsatzConfig& c, const EncodingConfig& e) {
          return CircuitForward(x, ParamsFromRows(angles), c, e);
        },
        py::arg("x"), py::arg("angles"), py::arg("cfg"), py::arg("enc_cfg"));
  m.def("parameter_shift_jacobian",
        [](const std::vector<double>& x, const std::vector<std::vector<double>>& angles,
           const AnsatzConfig& c, const EncodingConfig& e) {
          return JacobianRows(ParameterShiftJacobian(x, ParamsFromRows(angles), c, e));
        },
        py::arg("x"), py::arg("angles"), py::arg("cfg"), py::arg("enc_cfg"));
  m.def("finite_diff_jacobian",
        [](const std::vector<double>& x, const std::vector<std::vector<double>>& angles,
           const AnsatzConfig& c, const EncodingConfig& e, double eps) {
          return JacobianRows(FiniteDiffJacobian(x, ParamsFromRows(angles), c, e, eps));
        },
        py::arg("x"), py::arg("angles"), py::arg("cfg"), py::arg("enc_cfg"),
        py::arg("epsilon") = 1e-5);

  py::class_<LabeledExample>(m, "LabeledExample")
      .def(py::init<>())
      .def_readwrite("id", &LabeledExample::id)
      .def_readwrite("label", &LabeledExample::label)
      .def_readwrite("features", &LabeledExample::features)
      .def_readwrite("sentence", &LabeledExample::sentence);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("feature_dim", &Dataset::feature_dim)
      .def_readonly("examples", &Dataset::examples)
      .def("__len__", &Dataset::size);

  m.def("load_csv", &LoadCsv, py::arg("path"));
  m.def("save_csv", &SaveCsv, py::arg("dataset"), py::arg("path"),
        py::arg("comment") = std::vector<std::string>{});
  m.def("synthesize", &Synthesize, py::arg("n_per_class"), py::arg("dim"),
        py::arg("separation"), py::arg("seed"));
  m.def("stats_json",
        [](const Dataset& d) { return StatsToJson(ComputeStats(d)).dump(); },
        py::arg("dataset"));

  py::class_<HybridModel>(m, "HybridModel")
      .def_property_readonly("num_qubits", &HybridModel::num_qubits)
      .def_property_readonly("angles",
                             [](const HybridModel& h) { return ParamsToRows(h.params); })
      .def_property_readonly("head_weights",
                             [](const HybridModel& h) { return h.head.weights; })
      .def_property_readonly("head_biases",
                             [](const HybridModel& h) { return h.head.biases; });

  m.def("init_model",
        [](std::size_t feature_dim, int layers, Axis axis, std::uint64_t seed,
           double pad_value) {
          return InitModel(EncodingConfig{feature_dim, pad_value}, layers, axis, seed);
        },
        py::arg("feature_dim"), py::arg("num_layers") = 6, py::arg("axis") = Axis::kX,
        py::arg("seed") = 0, py::arg("pad_value") = kDefaultPadValue);
  m.def("hybrid_forward",
        [](const std::vector<double>& x, const HybridModel& h) {
          return HybridForward(x, h);
        },
        py::arg("x"), py::arg("model"));
  m.def("mcc",
        [](std::int64_t tn, std::int64_t fp, std::int64_t fn, std::int64_t tp) {
          return Mcc(Confusion{{{tn, fp}, {fn, tp}}});
        },
        py::arg("tn"), py::arg("fp"), py::arg("fn"), py::arg("tp"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("shuffle", &TrainConfig::shuffle)
      .def_readwrite("freeze_circuit", &TrainConfig::freeze_circuit)
      .def_readwrite("threads", &TrainConfig::threads);

  py::class_<EpochRecord>(m, "EpochRecord")
      .def_readonly("epoch", &EpochRecord::epoch)
      .def_readonly("train_loss", &EpochRecord::train_loss)
      .def_readonly("val_loss", &EpochRecord::val_loss)
      .def_readonly("val_accuracy", &EpochRecord::val_accuracy)
      .def_readonly("val_mcc", &EpochRecord::val_mcc);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("accuracy", &EvalReport::accuracy)
      .def_readonly("mcc", &EvalReport::mcc)
      .def_readonly("loss", &EvalReport::loss)
      .def_readonly("confusion", &EvalReport::confusion);

  m.def("train",
        [](const HybridModel& model, const Dataset& train_set, const Dataset& val_set,
           const TrainConfig& cfg) {
          py::gil_scoped_release release;
          TrainResult r = Train(model, train_set, val_set, cfg);
          return std::make_pair(std::move(r.model), std::move(r.history));
        },
        py::arg("model"), py::arg("train_set"), py::arg("val_set"), py::arg("cfg"));
  m.def("evaluate", &Evaluate, py::arg("model"), py::arg("dataset"),
        py::arg("threads") = 1);
  m.def("save_checkpoint",
        [](const std::filesystem::path& p, const HybridModel& h) { SaveCheckpoint(p, h); },
        py::arg("path"), py::arg("model"));
  m.def("load_checkpoint",
        [](const std::filesystem::path& p) { return LoadCheckpoint(p).model; },
        py::arg("path"));

  m.def("explain_json",
        [](const HybridModel& model, const LabeledExample& ex, int groups,
           const std::vector<double>& baseline, const std::string& method,
           int samples, std::uint64_t seed, int replicates) {
          AttributionRequest req;
          req.example = ex;
          req.groups = EqualBlockGroups(ex.features.size(), groups);
          req.baseline = baseline;
          req.method = ParseShapleyMethod(method);
          req.samples = samples;
          req.seed = seed;
          req.replicates = replicates;
          return ReportToJson(Explain(ClassOneProbability(model), req)).dump();
        },
        py::arg("model"), py::arg("example"), py::arg("groups"), py::arg("baseline"),
        py::arg("method") = "exact", py::arg("samples") = 1000, py::arg("seed") = 0,
        py::arg("replicates") = 8);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = RunCli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
