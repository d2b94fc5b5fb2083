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

#include "vqcl/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "vqcl/errors.h"
#include "vqcl/gradients.h"
#include "vqcl/parallel.h"
#include "vqcl/random.h"

namespace vqcl {
namespace {

constexpr double kProbFloor = 1e-12;

struct ExampleGradient {
  std::vector<double> angles;
  std::vector<double> weights;
  std::array<double, kNumClasses> biases{};
  double loss = 0.0;
};

ExampleGradient GradientForExample(const LabeledExample& ex,
                                   const HybridModel& model,
                                   bool freeze_circuit) {
  const int n = model.num_qubits();
  const QuantumState encoded = AmplitudeEncode(ex.features, model.encoding);
  const std::vector<double> z =
      CircuitForwardFromState(encoded, model.params, model.ansatz);
  const Probabilities p = HeadForward(z, model.head);

  ExampleGradient g;
  g.loss = CrossEntropy(p, ex.label);
  std::array<double, kNumClasses> delta{};
  for (int c = 0; c < kNumClasses; ++c) {
    delta[c] = p[c] - (c == ex.label ? 1.0 : 0.0);
  }
  g.biases = delta;
  g.weights.resize(static_cast<std::size_t>(kNumClasses) * n);
  for (int c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < n; ++i) {
      g.weights[static_cast<std::size_t>(c) * n + i] = delta[c] * z[i];
    }
  }
  g.angles.assign(model.params.size(), 0.0);
  if (freeze_circuit) return g;

  std::vector<double> dz(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < kNumClasses; ++c) dz[i] += model.head.w(c, i) * delta[c];
  }
  const CircuitJacobian jac = ParameterShiftJacobian(
      ex.features, model.params, model.ansatz, model.encoding);
  for (std::size_t j = 0; j < jac.num_params(); ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += jac.at(j, k) * dz[k];
    g.angles[j] = acc;
  }
  return g;
}

template <typename Get>
ModelGradients BatchGradients(std::size_t count, Get&& get,
                              const HybridModel& model,
                              const GradientOptions& options) {
  if (count == 0) throw DomainError("gradient of an empty batch");
  model.Validate();
  std::vector<ExampleGradient> per_example(count);
  ParallelFor(count, options.threads, [&](std::size_t i) {
    const LabeledExample& ex = get(i);
    if (ex.features.size() != model.encoding.feature_dim) {
      throw ShapeError("example '" + ex.id + "' has " +
                       std::to_string(ex.features.size()) +
                       " features, model expects " +
                       std::to_string(model.encoding.feature_dim));
    }
    per_example[i] = GradientForExample(ex, model, options.freeze_circuit);
  });

  ModelGradients out;
  out.angles.assign(model.params.size(), 0.0);
  out.weights.assign(model.head.weights.size(), 0.0);
  for (const auto& g : per_example) {
    for (std::size_t j = 0; j < out.angles.size(); ++j) out.angles[j] += g.angles[j];
    for (std::size_t j = 0; j < out.weights.size(); ++j) out.weights[j] += g.weights[j];
    for (int c = 0; c < kNumClasses; ++c) out.biases[c] += g.biases[c];
    out.loss += g.loss;
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (double& v : out.angles) v *= inv;
  for (double& v : out.weights) v *= inv;
  for (double& v : out.biases) v *= inv;
  out.loss *= inv;
  return out;
}

// Fisher-Yates driven by UniformUnit so the permutation does not depend on
// the standard library's distribution implementations.
void Shuffle(std::vector<std::size_t>& order, Rng& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(UniformUnit(rng) * static_cast<double>(i));
    if (j >= i) j = i - 1;
    std::swap(order[i - 1], order[j]);
  }
}

}  // namespace

void MlpHead::Validate() const {
  if (num_inputs < 1) throw ShapeError("head needs at least one input");
  if (weights.size() != static_cast<std::size_t>(kNumClasses) * num_inputs) {
    throw ShapeError("head weight matrix has " + std::to_string(weights.size()) +
                     " entries, expected 2x" + std::to_string(num_inputs));
  }
  for (const double v : weights) {
    if (!std::isfinite(v)) throw DomainError("head weight is not finite");
  }
  for (const double v : biases) {
    if (!std::isfinite(v)) throw DomainError("head bias is not finite");
  }
}

MlpHead InitHead(int num_inputs, std::uint64_t seed) {
  MlpHead head(num_inputs);
  head.Validate();
  const double bound = 1.0 / std::sqrt(static_cast<double>(num_inputs));
  Rng rng(seed);
  for (double& v : head.weights) v = (2 * UniformUnit(rng) - 1) * bound;
  for (double& v : head.biases) v = (2 * UniformUnit(rng) - 1) * bound;
  return head;
}

void HybridModel::Validate() const {
  encoding.Validate();
  CheckCircuitShapes(params, ansatz, encoding);
  head.Validate();
  if (head.num_inputs != ansatz.num_qubits) {
    throw ShapeError("head takes " + std::to_string(head.num_inputs) +
                     " inputs but the circuit measures " +
                     std::to_string(ansatz.num_qubits) + " qubits");
  }
}

HybridModel InitModel(const EncodingConfig& encoding, int num_layers,
                      Axis axis, std::uint64_t seed) {
  encoding.Validate();
  HybridModel model;
  model.encoding = encoding;
  model.ansatz = {encoding.num_qubits(), num_layers, axis};
  model.params = InitParams(model.ansatz, DeriveSeed(seed, "init"));
  model.head = InitHead(model.ansatz.num_qubits, DeriveSeed(seed, "init-head"));
  return model;
}

Probabilities Softmax(std::span<const double, kNumClasses> logits) {
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m);
  const double e1 = std::exp(logits[1] - m);
  const double total = e0 + e1;
  return {e0 / total, e1 / total};
}

Probabilities HeadForward(std::span<const double> z, const MlpHead& head) {
  if (z.size() != static_cast<std::size_t>(head.num_inputs)) {
    throw ShapeError("head expects " + std::to_string(head.num_inputs) +
                     " inputs, got " + std::to_string(z.size()));
  }
  std::array<double, kNumClasses> logits = head.biases;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < head.num_inputs; ++i) logits[c] += head.w(c, i) * z[i];
  }
  return Softmax(logits);
}

double CrossEntropy(const Probabilities& probs, int label) {
  if (label != 0 && label != 1) {
    throw DomainError("label must be 0 or 1, got " + std::to_string(label));
  }
  return -std::log(std::max(probs[label], kProbFloor));
}

Probabilities HybridForward(std::span<const double> x, const HybridModel& model) {
  return HeadForward(
      CircuitForward(x, model.params, model.ansatz, model.encoding), model.head);
}

int PredictClass(const Probabilities& probs) {
  return probs[1] > probs[0] ? 1 : 0;
}

ModelGradients LossGradients(std::span<const LabeledExample> batch,
                             const HybridModel& model,
                             const GradientOptions& options) {
  return BatchGradients(
      batch.size(),
      [&](std::size_t i) -> const LabeledExample& { return batch[i]; }, model,
      options);
}

ModelGradients LossGradients(const Dataset& dataset,
                             std::span<const std::size_t> indices,
                             const HybridModel& model,
                             const GradientOptions& options) {
  return BatchGradients(
      indices.size(),
      [&](std::size_t i) -> const LabeledExample& {
        return dataset.examples.at(indices[i]);
      },
      model, options);
}

AdamState AdamState::ForSize(std::size_t n, double lr) {
  AdamState s;
  s.lr = lr;
  s.first_moment.assign(n, 0.0);
  s.second_moment.assign(n, 0.0);
  return s;
}

void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state) {
  if (params.size() != grads.size() ||
      state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw ShapeError("adam step: " + std::to_string(params.size()) +
                     " params, " + std::to_string(grads.size()) +
                     " grads, " + std::to_string(state.first_moment.size()) +
                     " moments");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g * g;
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

std::vector<double> FlattenTrainable(const HybridModel& model) {
  std::vector<double> flat;
  flat.reserve(model.params.size() + model.head.weights.size() + kNumClasses);
  const auto angles = model.params.flat();
  flat.insert(flat.end(), angles.begin(), angles.end());
  flat.insert(flat.end(), model.head.weights.begin(), model.head.weights.end());
  flat.insert(flat.end(), model.head.biases.begin(), model.head.biases.end());
  return flat;
}

void UnflattenTrainable(std::span<const double> flat, HybridModel& model) {
  const std::size_t na = model.params.size();
  const std::size_t nw = model.head.weights.size();
  if (flat.size() != na + nw + kNumClasses) {
    throw ShapeError("flat parameter vector has wrong length");
  }
  std::copy_n(flat.begin(), na, model.params.flat().begin());
  std::copy_n(flat.begin() + na, nw, model.head.weights.begin());
  std::copy_n(flat.begin() + na + nw, kNumClasses, model.head.biases.begin());
}

std::vector<double> FlattenGradients(const ModelGradients& grads) {
  std::vector<double> flat(grads.angles);
  flat.insert(flat.end(), grads.weights.begin(), grads.weights.end());
  flat.insert(flat.end(), grads.biases.begin(), grads.biases.end());
  return flat;
}

void TrainConfig::Validate() const {
  if (batch_size < 1) throw DomainError("batch_size must be >= 1");
  if (epochs < 1) throw DomainError("epochs must be >= 1");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
    throw DomainError("learning rate must be positive");
  }
  if (threads < 1) throw DomainError("threads must be >= 1");
}

TrainResult Train(HybridModel model, const Dataset& train_set,
                  const Dataset& val_set, const TrainConfig& cfg) {
  cfg.Validate();
  model.Validate();
  if (train_set.empty()) throw DomainError("training set is empty");
  if (val_set.empty()) throw DomainError("validation set is empty");
  for (const Dataset* ds : {&train_set, &val_set}) {
    if (ds->feature_dim != model.encoding.feature_dim) {
      throw ShapeError(std::string(ds == &train_set ? "training" : "validation") +
                       " set has feature dimension " +
                       std::to_string(ds->feature_dim) + ", model expects " +
                       std::to_string(model.encoding.feature_dim));
    }
    ds->Validate();
  }

  TrainResult result;
  std::vector<double> flat = FlattenTrainable(model);
  result.optimizer = AdamState::ForSize(flat.size(), cfg.learning_rate);
  Rng shuffle_rng(DeriveSeed(cfg.seed, "shuffle"));
  std::vector<std::size_t> order(train_set.size());
  const GradientOptions grad_options{cfg.freeze_circuit, cfg.threads};
  const auto batch = static_cast<std::size_t>(cfg.batch_size);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (cfg.shuffle) Shuffle(order, shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      const std::span<const std::size_t> indices(order.data() + start, len);
      const ModelGradients grads =
          LossGradients(train_set, indices, model, grad_options);
      loss_sum += grads.loss * static_cast<double>(len);
      AdamStep(flat, FlattenGradients(grads), result.optimizer);
      UnflattenTrainable(flat, model);
    }
    const EvalReport val = Evaluate(model, val_set, cfg.threads);
    result.history.push_back({epoch,
                              loss_sum / static_cast<double>(order.size()),
                              val.loss, val.accuracy, val.mcc});
  }
  result.model = std::move(model);
  return result;
}

nlohmann::json HistoryToJson(std::span<const EpochRecord> history) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : history) {
    out.push_back({{"epoch", r.epoch},
                   {"train_loss", r.train_loss},
                   {"val_loss", r.val_loss},
                   {"val_accuracy", r.val_accuracy},
                   {"val_mcc", r.val_mcc}});
  }
  return out;
}

double Mcc(const Confusion& confusion) {
  const double tn = static_cast<double>(confusion[0][0]);
  const double fp = static_cast<double>(confusion[0][1]);
  const double fn = static_cast<double>(confusion[1][0]);
  const double tp = static_cast<double>(confusion[1][1]);
  if (tn < 0 || fp < 0 || fn < 0 || tp < 0) {
    throw DomainError("confusion counts must be non-negative");
  }
  if (tn + fp + fn + tp == 0) throw DomainError("confusion matrix is empty");
  const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0) return 0.0;
  return std::clamp((tp * tn - fp * fn) / std::sqrt(denom), -1.0, 1.0);
}

EvalReport Evaluate(const HybridModel& model, const Dataset& dataset,
                    int threads) {
  if (dataset.empty()) throw DomainError("cannot evaluate on an empty dataset");
  model.Validate();
  if (dataset.feature_dim != model.encoding.feature_dim) {
    throw ShapeError("dataset has feature dimension " +
                     std::to_string(dataset.feature_dim) +
                     ", model expects " +
                     std::to_string(model.encoding.feature_dim));
  }
  dataset.Validate();
  std::vector<Probabilities> probs(dataset.size());
  ParallelFor(dataset.size(), threads, [&](std::size_t i) {
    probs[i] = HybridForward(dataset.examples[i].features, model);
  });
  EvalReport report;
  double loss = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int label = dataset.examples[i].label;
    ++report.confusion[label][PredictClass(probs[i])];
    loss += CrossEntropy(probs[i], label);
  }
  const double total = static_cast<double>(dataset.size());
  report.accuracy =
      static_cast<double>(report.confusion[0][0] + report.confusion[1][1]) /
      total;
  report.mcc = Mcc(report.confusion);
  report.loss = loss / total;
  return report;
}

nlohmann::json EvalReportToJson(const EvalReport& report) {
  return {{"accuracy", report.accuracy},
          {"mcc", report.mcc},
          {"loss", report.loss},
          {"confusion",
           {{"tn", report.confusion[0][0]},
            {"fp", report.confusion[0][1]},
            {"fn", report.confusion[1][0]},
            {"tp", report.confusion[1][1]}}}};
}

// --- checkpoint -------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'V', 'Q', 'C', 'L'};

class Writer {
 public:
  void Bytes(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void U8(std::uint8_t v) { out_.push_back(v); }
  void U16(std::uint16_t v) { Le(v, 2); }
  void U32(std::uint32_t v) { Le(v, 4); }
  void U64(std::uint64_t v) { Le(v, 8); }
  void F64(double v) { Le(std::bit_cast<std::uint64_t>(v), 8); }
  void F64s(std::span<const double> vs) {
    for (const double v : vs) F64(v);
  }
  std::vector<std::uint8_t> Take() { return std::move(out_); }

 private:
  void Le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint8_t U8() { return static_cast<std::uint8_t>(Le(1)); }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Le(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Le(4)); }
  std::uint64_t U64() { return Le(8); }
  double F64() { return std::bit_cast<double>(Le(8)); }
  std::vector<double> F64s(std::size_t n) {
    Need(8 * n);
    std::vector<double> out(n);
    for (double& v : out) v = F64();
    return out;
  }
  void Need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw CheckpointError("checkpoint is truncated");
  }
  bool AtEnd() const { return pos_ == in_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  std::uint64_t Le(int n) {
    Need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{in_[pos_++]} << (8 * i);
    return v;
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint8_t AxisCode(Axis axis) { return static_cast<std::uint8_t>(axis); }

}  // namespace

std::vector<std::uint8_t> SerializeCheckpoint(
    const HybridModel& model, const std::optional<AdamState>& optimizer) {
  model.Validate();
  if (model.encoding.order != PadOrder::kPadThenNormalize) {
    throw CheckpointError(
        "checkpoint format only stores pad_then_normalize encodings");
  }
  Writer w;
  w.Bytes(kMagic, 4);
  w.U16(kCheckpointVersion);
  w.U32(static_cast<std::uint32_t>(model.encoding.feature_dim));
  w.F64(model.encoding.pad_value);
  w.U16(static_cast<std::uint16_t>(model.ansatz.num_qubits));
  w.U16(static_cast<std::uint16_t>(model.ansatz.num_layers));
  w.U8(AxisCode(model.ansatz.rotation_axis));
  w.F64s(model.params.flat());
  w.F64s(model.head.weights);
  w.F64s(model.head.biases);
  w.U8(optimizer ? 1 : 0);
  if (optimizer) {
    const std::size_t p = FlattenTrainable(model).size();
    if (optimizer->first_moment.size() != p ||
        optimizer->second_moment.size() != p) {
      throw ShapeError("optimizer moments do not match the model");
    }
    w.U64(optimizer->step);
    w.F64(optimizer->lr);
    w.F64(optimizer->beta1);
    w.F64(optimizer->beta2);
    w.F64(optimizer->eps);
    w.F64s(optimizer->first_moment);
    w.F64s(optimizer->second_moment);
  }
  return w.Take();
}

Checkpoint DeserializeCheckpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
    throw CheckpointError("not a VQCL checkpoint (bad magic bytes)");
  }
  Reader r(bytes.subspan(4));
  const std::uint16_t version = r.U16();
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " +
                          std::to_string(version));
  }
  Checkpoint ck;
  HybridModel& m = ck.model;
  m.encoding.feature_dim = r.U32();
  m.encoding.pad_value = r.F64();
  m.ansatz.num_qubits = r.U16();
  m.ansatz.num_layers = r.U16();
  const std::uint8_t axis = r.U8();
  if (axis > 2) throw CheckpointError("invalid axis code " + std::to_string(axis));
  m.ansatz.rotation_axis = static_cast<Axis>(axis);
  const int n = m.ansatz.num_qubits;
  const int layers = m.ansatz.num_layers;
  try {
    m.ansatz.Validate();
    m.encoding.Validate();
    m.params = AnsatzParams(layers, n,
                            r.F64s(static_cast<std::size_t>(layers) * n));
    m.head = MlpHead(n);
    m.head.weights = r.F64s(static_cast<std::size_t>(kNumClasses) * n);
    m.head.biases[0] = r.F64();
    m.head.biases[1] = r.F64();
    m.Validate();
  } catch (const CheckpointError&) {
    throw;
  } catch (const Error& e) {
    throw CheckpointError(std::string("checkpoint violates model invariants: ") +
                          e.what());
  }
  const std::uint8_t has_adam = r.U8();
  if (has_adam > 1) throw CheckpointError("invalid optimizer flag");
  if (has_adam == 1) {
    AdamState s;
    s.step = r.U64();
    s.lr = r.F64();
    s.beta1 = r.F64();
    s.beta2 = r.F64();
    s.eps = r.F64();
    const std::size_t p = FlattenTrainable(m).size();
    s.first_moment = r.F64s(p);
    s.second_moment = r.F64s(p);
    ck.optimizer = std::move(s);
  }
  if (!r.AtEnd()) throw CheckpointError("trailing bytes after checkpoint");
  return ck;
}

void SaveCheckpoint(const std::filesystem::path& path, const HybridModel& model,
                    const std::optional<AdamState>& optimizer) {
  const auto bytes = SerializeCheckpoint(model, optimizer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("write failed for " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return DeserializeCheckpoint(bytes);
}

}  // namespace vqcl
