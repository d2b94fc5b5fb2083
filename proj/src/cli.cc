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

#include "vqcl/cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "json.hpp"
#include "vqcl/ansatz.h"
#include "vqcl/data.h"
#include "vqcl/errors.h"
#include "vqcl/explain.h"
#include "vqcl/gradients.h"
#include "vqcl/model.h"
#include "vqcl/random.h"
#include "vqcl/run_config.h"

namespace vqcl {
namespace {

using nlohmann::json;

// Missing or contradictory arguments detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

void WriteJsonFile(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path);
}

bool Given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

// --- synth ------------------------------------------------------------------

struct SynthFlags {
  std::size_t per_class = 100;
  std::size_t dim = 16;
  double separation = 6.0;
  std::uint64_t seed = 0;
  std::string output;
};

int RunSynth(const SynthFlags& f, std::ostream& out) {
  const Dataset ds = Synthesize(f.per_class, f.dim, f.separation, f.seed);
  SaveCsv(ds, f.output,
          {"synthetic: per_class=" + std::to_string(f.per_class) +
           " dim=" + std::to_string(f.dim) + " separation=" +
           json(f.separation).dump() + " seed=" + std::to_string(f.seed)});
  out << "wrote " << ds.size() << " examples to " << f.output << '\n';
  return kExitOk;
}

// --- train ------------------------------------------------------------------

struct TrainFlags {
  std::string config;
  std::string train, val, checkpoint, history;
  int layers = 6;
  std::string axis = "X";
  double pad = kDefaultPadValue;
  std::string pad_order = "pad_then_normalize";
  int batch_size = 32;
  int epochs = 7;
  double lr = 1e-5;
  std::uint64_t seed = 0;
  bool no_shuffle = false;
  bool freeze = false;
  int threads = 1;

  struct Opts {
    CLI::Option *train, *val, *checkpoint, *history, *layers, *axis, *pad,
        *pad_order, *batch_size, *epochs, *lr, *seed, *no_shuffle, *freeze,
        *threads;
  } opt{};
};

RunConfig ResolveTrainConfig(const TrainFlags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = LoadRunConfig(f.config);
  const auto& o = f.opt;
  try {
    if (Given(o.train)) cfg.train_path = f.train;
    if (Given(o.val)) cfg.val_path = f.val;
    if (Given(o.checkpoint)) cfg.checkpoint_path = f.checkpoint;
    if (Given(o.history)) cfg.history_path = f.history;
    if (Given(o.layers)) cfg.num_layers = f.layers;
    if (Given(o.axis)) cfg.axis = ParseAxis(f.axis);
    if (Given(o.pad)) cfg.pad_value = f.pad;
    if (Given(o.pad_order)) cfg.pad_order = ParsePadOrder(f.pad_order);
    if (Given(o.batch_size)) cfg.train.batch_size = f.batch_size;
    if (Given(o.epochs)) cfg.train.epochs = f.epochs;
    if (Given(o.lr)) cfg.train.learning_rate = f.lr;
    if (Given(o.seed)) cfg.train.seed = f.seed;
    if (Given(o.no_shuffle)) cfg.train.shuffle = false;
    if (Given(o.freeze)) cfg.train.freeze_circuit = true;
    if (Given(o.threads)) cfg.train.threads = f.threads;
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  cfg.Validate();
  if (cfg.train_path.empty()) throw UsageError("no training data: pass --train");
  if (cfg.checkpoint_path.empty()) throw UsageError("no output: pass --checkpoint");
  return cfg;
}

int RunTrain(const TrainFlags& flags, std::ostream& out) {
  RunConfig cfg = ResolveTrainConfig(flags);
  const Dataset train_set = LoadCsv(cfg.train_path);
  const Dataset val_set = cfg.val_path.empty() ? train_set : LoadCsv(cfg.val_path);
  if (val_set.feature_dim != train_set.feature_dim) {
    throw ShapeError("validation file " + cfg.val_path + " has " +
                     std::to_string(val_set.feature_dim) +
                     " features but training file " + cfg.train_path + " has " +
                     std::to_string(train_set.feature_dim));
  }
  const EncodingConfig enc = cfg.ResolveEncoding(train_set.feature_dim);
  cfg.feature_dim = enc.feature_dim;
  cfg.num_qubits = enc.num_qubits();
  if (cfg.history_path.empty()) cfg.history_path = cfg.checkpoint_path + ".history.json";

  const HybridModel init = InitModel(enc, cfg.num_layers, cfg.axis, cfg.train.seed);
  const TrainResult result = Train(init, train_set, val_set, cfg.train);

  SaveCheckpoint(cfg.checkpoint_path, result.model, result.optimizer);
  WriteJsonFile(cfg.history_path, HistoryToJson(result.history));
  WriteJsonFile(cfg.checkpoint_path + ".config.json", cfg.ToJson());

  const EpochRecord& last = result.history.back();
  out << "trained " << result.history.size() << " epochs on "
      << train_set.size() << " examples (" << enc.num_qubits() << " qubits, "
      << cfg.num_layers << " layers): val_accuracy=" << last.val_accuracy
      << " val_mcc=" << last.val_mcc << " val_loss=" << last.val_loss << '\n';
  out << "checkpoint: " << cfg.checkpoint_path << "  history: " << cfg.history_path
      << '\n';
  return kExitOk;
}

// --- eval / predict -----------------------------------------------------------

struct EvalFlags {
  std::string checkpoint;
  std::string data;
  std::string output;
  int threads = 1;
};

int RunEval(const EvalFlags& f, std::ostream& out) {
  const Checkpoint ck = LoadCheckpoint(f.checkpoint);
  const Dataset ds = LoadCsv(f.data);
  const EvalReport report = Evaluate(ck.model, ds, f.threads);
  json doc = EvalReportToJson(report);
  doc["count"] = ds.size();
  doc["checkpoint"] = f.checkpoint;
  doc["data"] = f.data;
  std::ifstream sidecar(f.checkpoint + ".config.json");
  if (sidecar) {
    try {
      doc["config"] = json::parse(sidecar);
    } catch (const json::exception&) {
      doc["config"] = nullptr;
    }
  }
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int RunPredict(const EvalFlags& f, std::ostream& out) {
  const Checkpoint ck = LoadCheckpoint(f.checkpoint);
  const Dataset ds = LoadCsv(f.data);
  if (ds.feature_dim != ck.model.encoding.feature_dim) {
    throw ShapeError(f.data + " has " + std::to_string(ds.feature_dim) +
                     " features, model expects " +
                     std::to_string(ck.model.encoding.feature_dim));
  }
  json rows = json::array();
  for (const auto& ex : ds.examples) {
    const Probabilities p = HybridForward(ex.features, ck.model);
    rows.push_back({{"id", ex.id},
                    {"p0", p[0]},
                    {"p1", p[1]},
                    {"predicted", PredictClass(p)},
                    {"label", ex.label}});
  }
  if (f.output.empty()) {
    out << rows.dump(2) << '\n';
  } else {
    WriteJsonFile(f.output, rows);
  }
  return kExitOk;
}

// --- explain ------------------------------------------------------------------

struct ExplainFlags {
  std::string checkpoint;
  std::string data;
  std::string id;
  std::size_t index = 0;
  int groups = 8;
  std::string token_groups;
  std::string baseline_data;
  std::string method = "exact";
  int samples = 1000;
  int replicates = 8;
  double perturbation = 0.05;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "json";
  std::string output;
  CLI::Option* id_opt = nullptr;
};

int RunExplain(const ExplainFlags& f, std::ostream& out) {
  ReportFormat format;
  ShapleyMethod method;
  try {
    format = ParseReportFormat(f.format);
    method = ParseShapleyMethod(f.method);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const Checkpoint ck = LoadCheckpoint(f.checkpoint);
  const Dataset ds = LoadCsv(f.data);
  if (ds.feature_dim != ck.model.encoding.feature_dim) {
    throw ShapeError(f.data + " has " + std::to_string(ds.feature_dim) +
                     " features, model expects " +
                     std::to_string(ck.model.encoding.feature_dim));
  }

  AttributionRequest req;
  if (Given(f.id_opt)) {
    const auto it = std::find_if(ds.examples.begin(), ds.examples.end(),
                                 [&](const auto& ex) { return ex.id == f.id; });
    if (it == ds.examples.end()) throw DomainError("no example with id '" + f.id + "'");
    req.example = *it;
  } else {
    if (f.index >= ds.size()) {
      throw DomainError("example index " + std::to_string(f.index) +
                        " beyond dataset of " + std::to_string(ds.size()));
    }
    req.example = ds.examples[f.index];
  }
  req.groups = f.token_groups.empty()
                   ? EqualBlockGroups(ds.feature_dim,
                                      std::min<int>(f.groups, static_cast<int>(ds.feature_dim)))
                   : LoadTokenGroups(f.token_groups, req.example.id);
  req.baseline = FeatureMean(f.baseline_data.empty() ? ds : LoadCsv(f.baseline_data));
  if (req.baseline.size() != ds.feature_dim) {
    throw ShapeError("baseline data has the wrong feature dimension");
  }
  req.method = method;
  req.samples = f.samples;
  req.replicates = f.replicates;
  req.perturbation = f.perturbation;
  req.seed = DeriveSeed(f.seed, "shap");
  req.threads = f.threads;

  const AttributionReport report = Explain(ClassOneProbability(ck.model), req);
  const json provenance = {
      {"config",
       {{"checkpoint", f.checkpoint},
        {"data", f.data},
        {"baseline_data", f.baseline_data},
        {"groups", f.token_groups.empty() ? json(f.groups) : json(f.token_groups)},
        {"method", f.method},
        {"samples", f.samples},
        {"replicates", f.replicates},
        {"perturbation", f.perturbation},
        {"seed", f.seed}}}};
  ExportReport(report, f.output, format, provenance);

  double sum = 0.0;
  for (const double v : report.phi) sum += v;
  out << "explained '" << report.example_id << "' over " << report.phi.size()
      << " groups (" << f.method << "): f(x)=" << report.fx
      << " f(baseline)=" << report.base_value << " sum(phi)=" << sum << '\n';
  return kExitOk;
}

// --- gradcheck ----------------------------------------------------------------

struct GradcheckFlags {
  int instances = 100;
  int max_qubits = 4;
  int max_layers = 3;
  int qubits = 0;
  int layers = 0;
  std::uint64_t seed = 0;
  double epsilon = 1e-5;
  double tolerance = 1e-6;
  double shift = std::numbers::pi / 2;
};

int RunGradcheck(const GradcheckFlags& f, std::ostream& out) {
  if (f.instances < 1) throw UsageError("--instances must be >= 1");
  if (f.max_qubits < 1 || f.max_layers < 1) {
    throw UsageError("--max-qubits and --max-layers must be >= 1");
  }
  Rng rng(DeriveSeed(f.seed, "gradcheck"));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto pick = [&](int lo, int hi) {
    return lo + static_cast<int>(UniformUnit(rng) * (hi - lo + 1));
  };
  double worst = 0.0;
  for (int i = 0; i < f.instances; ++i) {
    AnsatzConfig cfg;
    cfg.num_qubits = f.qubits > 0 ? f.qubits : pick(1, f.max_qubits);
    cfg.num_layers = f.layers > 0 ? f.layers : pick(1, f.max_layers);
    cfg.rotation_axis = static_cast<Axis>(pick(0, 2));
    const std::size_t full = std::size_t{1} << cfg.num_qubits;
    EncodingConfig enc;
    // Widths that need exactly num_qubits qubits, so padding is exercised.
    const int width = cfg.num_qubits == 1
                          ? 2
                          : pick(static_cast<int>(full / 2) + 1, static_cast<int>(full));
    enc.feature_dim = static_cast<std::size_t>(width);
    std::vector<double> x(enc.feature_dim);
    for (double& v : x) v = normal(rng);
    const AnsatzParams params = InitParams(cfg, rng());
    ShiftOptions shift;
    shift.shift = f.shift;
    const auto ps = ParameterShiftJacobian(x, params, cfg, enc, shift);
    const auto fd = FiniteDiffJacobian(x, params, cfg, enc, f.epsilon);
    worst = std::max(worst, MaxAbsDifference(ps, fd));
  }
  const bool pass = worst < f.tolerance;
  out << json{{"instances", f.instances},
              {"epsilon", f.epsilon},
              {"tolerance", f.tolerance},
              {"max_deviation", worst},
              {"pass", pass}}
             .dump()
      << '\n';
  return pass ? kExitOk : kExitRuntimeError;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Variational quantum classifier toolkit"};
  app.name("vqcl");
  app.require_subcommand(1);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic two-cluster CSV");
  synth_cmd->add_option("--per-class", synth.per_class, "Examples per class");
  synth_cmd->add_option("--dim", synth.dim, "Feature dimension");
  synth_cmd->add_option("--sep", synth.separation, "Distance between cluster means");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("-o,--output", synth.output, "Output CSV")->required();

  std::string stats_path;
  auto* stats_cmd = app.add_subcommand("stats", "Print dataset statistics as JSON");
  stats_cmd->add_option("data", stats_path, "Embedding CSV")->required();

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Train a hybrid model");
  train_cmd->add_option("--config", train.config, "JSON run configuration");
  auto& to = train.opt;
  to.train = train_cmd->add_option("--train", train.train, "Training CSV");
  to.val = train_cmd->add_option("--val", train.val, "Validation CSV (default: training set)");
  to.checkpoint = train_cmd->add_option("-o,--checkpoint", train.checkpoint, "Checkpoint to write");
  to.history = train_cmd->add_option("--history", train.history, "History JSON (default: <checkpoint>.history.json)");
  to.layers = train_cmd->add_option("--layers", train.layers, "Entangling layers");
  to.axis = train_cmd->add_option("--axis", train.axis, "Rotation axis X|Y|Z");
  to.pad = train_cmd->add_option("--pad", train.pad, "Padding constant");
  to.pad_order = train_cmd->add_option("--pad-order", train.pad_order,
                                       "pad_then_normalize|normalize_then_pad");
  to.batch_size = train_cmd->add_option("--batch-size", train.batch_size, "Mini-batch size");
  to.epochs = train_cmd->add_option("--epochs", train.epochs, "Epochs");
  to.lr = train_cmd->add_option("--lr", train.lr, "Adam learning rate");
  to.seed = train_cmd->add_option("--seed", train.seed, "Master seed");
  to.no_shuffle = train_cmd->add_flag("--no-shuffle", train.no_shuffle, "Keep file order");
  to.freeze = train_cmd->add_flag("--freeze-circuit", train.freeze, "Train the head only");
  to.threads = train_cmd->add_option("--threads", train.threads, "Worker threads");

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a CSV");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint")->required();
  eval_cmd->add_option("--data", eval.data, "Embedding CSV")->required();
  eval_cmd->add_option("--threads", eval.threads, "Worker threads");

  EvalFlags predict;
  auto* predict_cmd = app.add_subcommand("predict", "Class probabilities per example");
  predict_cmd->add_option("--checkpoint", predict.checkpoint, "Checkpoint")->required();
  predict_cmd->add_option("--data", predict.data, "Embedding CSV")->required();
  predict_cmd->add_option("-o,--output", predict.output, "Write JSON here instead of stdout");

  ExplainFlags explain;
  auto* explain_cmd = app.add_subcommand("explain", "Shapley attribution report");
  explain_cmd->add_option("--checkpoint", explain.checkpoint, "Checkpoint")->required();
  explain_cmd->add_option("--data", explain.data, "Embedding CSV")->required();
  explain.id_opt = explain_cmd->add_option("--id", explain.id, "Example id");
  explain_cmd->add_option("--index", explain.index, "Example row (default 0)");
  explain_cmd->add_option("--groups", explain.groups, "Number of equal feature blocks");
  explain_cmd->add_option("--token-groups", explain.token_groups, "Token-group JSON from the extractor");
  explain_cmd->add_option("--baseline-data", explain.baseline_data, "CSV whose feature mean is the baseline (default: --data)");
  explain_cmd->add_option("--method", explain.method, "exact|sampled");
  explain_cmd->add_option("--samples", explain.samples, "Permutations (sampled)");
  explain_cmd->add_option("--replicates", explain.replicates, "Perturbed replicates for the dendrogram");
  explain_cmd->add_option("--perturbation", explain.perturbation, "Replicate noise scale");
  explain_cmd->add_option("--seed", explain.seed, "Master seed");
  explain_cmd->add_option("--threads", explain.threads, "Worker threads");
  explain_cmd->add_option("--format", explain.format, "json|dot");
  explain_cmd->add_option("-o,--output", explain.output, "Report path")->required();

  GradcheckFlags grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare parameter-shift and finite-difference Jacobians");
  grad_cmd->add_option("--instances", grad.instances, "Random circuits");
  grad_cmd->add_option("--max-qubits", grad.max_qubits, "Largest qubit count");
  grad_cmd->add_option("--max-layers", grad.max_layers, "Largest layer count");
  grad_cmd->add_option("--qubits", grad.qubits, "Fix the qubit count");
  grad_cmd->add_option("--layers", grad.layers, "Fix the layer count");
  grad_cmd->add_option("--seed", grad.seed, "Master seed");
  grad_cmd->add_option("--epsilon", grad.epsilon, "Finite-difference step");
  grad_cmd->add_option("--tolerance", grad.tolerance, "Maximum allowed deviation");
  // Checker self-test only: a wrong shift must be detected.
  grad_cmd->add_option("--shift", grad.shift)->group("");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "vqcl: " << e.what() << '\n';
    err << "run 'vqcl --help' for usage\n";
    return kExitUsageError;
  }

  try {
    if (synth_cmd->parsed()) return RunSynth(synth, out);
    if (stats_cmd->parsed()) {
      out << StatsToJson(ComputeStats(LoadCsv(stats_path))).dump(2) << '\n';
      return kExitOk;
    }
    if (train_cmd->parsed()) return RunTrain(train, out);
    if (eval_cmd->parsed()) return RunEval(eval, out);
    if (predict_cmd->parsed()) return RunPredict(predict, out);
    if (explain_cmd->parsed()) return RunExplain(explain, out);
    if (grad_cmd->parsed()) return RunGradcheck(grad, out);
  } catch (const UsageError& e) {
    err << "vqcl: usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "vqcl: error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitUsageError;
}

}  // namespace vqcl
