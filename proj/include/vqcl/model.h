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

#ifndef VQCL_MODEL_H_
#define VQCL_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "vqcl/ansatz.h"
#include "vqcl/data.h"
#include "vqcl/encoding.h"

namespace vqcl {

inline constexpr int kNumClasses = 2;
using Probabilities = std::array<double, kNumClasses>;

// Affine layer n -> 2 followed by softmax. Weights are row-major [class][input].
struct MlpHead {
  int num_inputs = 0;
  std::vector<double> weights;
  std::array<double, kNumClasses> biases{};

  explicit MlpHead(int inputs = 0)
      : num_inputs(inputs),
        weights(static_cast<std::size_t>(kNumClasses) * inputs, 0.0) {}

  double w(int cls, int input) const {
    return weights[static_cast<std::size_t>(cls) * num_inputs + input];
  }
  void Validate() const;
  bool operator==(const MlpHead&) const = default;
};

// Uniform on [-1/sqrt(n), 1/sqrt(n)] for weights and biases.
MlpHead InitHead(int num_inputs, std::uint64_t seed);

struct HybridModel {
  EncodingConfig encoding;
  AnsatzConfig ansatz;
  AnsatzParams params;
  MlpHead head;

  // Throws ShapeError if encoding width, ansatz, params and head disagree.
  void Validate() const;
  int num_qubits() const { return ansatz.num_qubits; }
};

// Fresh model for `feature_dim` inputs. The qubit count follows from the
// encoding; angles come from InitParams(ansatz, DeriveSeed(seed, "init")) and
// the head from DeriveSeed(seed, "init-head").
HybridModel InitModel(const EncodingConfig& encoding, int num_layers,
                      Axis axis, std::uint64_t seed);

// Numerically stable softmax over two logits.
Probabilities Softmax(std::span<const double, kNumClasses> logits);
Probabilities HeadForward(std::span<const double> z, const MlpHead& head);

// -ln(max(probs[label], 1e-12)). Throws DomainError for labels outside {0,1}.
double CrossEntropy(const Probabilities& probs, int label);

Probabilities HybridForward(std::span<const double> x, const HybridModel& model);

// argmax with ties going to class 0.
int PredictClass(const Probabilities& probs);

struct ModelGradients {
  std::vector<double> angles;   // same layout as AnsatzParams::flat()
  std::vector<double> weights;  // same layout as MlpHead::weights
  std::array<double, kNumClasses> biases{};
  double loss = 0.0;  // batch-mean cross entropy at the current parameters
};

struct GradientOptions {
  bool freeze_circuit = false;
  int threads = 1;
};

// Mean-over-batch gradient of the cross-entropy loss. Head terms use
// dL/dlogit = p - onehot; circuit terms chain through the parameter-shift
// Jacobian. Reduction runs in batch order. Throws DomainError on an empty
// batch.
ModelGradients LossGradients(std::span<const LabeledExample> batch,
                             const HybridModel& model,
                             const GradientOptions& options = {});
ModelGradients LossGradients(const Dataset& dataset,
                             std::span<const std::size_t> indices,
                             const HybridModel& model,
                             const GradientOptions& options = {});

struct AdamState {
  std::uint64_t step = 0;
  double lr = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  static AdamState ForSize(std::size_t n, double lr);
  bool operator==(const AdamState&) const = default;
};

// One bias-corrected Adam update in place. Throws ShapeError when sizes
// disagree.
void AdamStep(std::span<double> params, std::span<const double> grads,
              AdamState& state);

// Trainable parameters in optimizer order: angles, head weights, biases.
std::vector<double> FlattenTrainable(const HybridModel& model);
void UnflattenTrainable(std::span<const double> flat, HybridModel& model);
std::vector<double> FlattenGradients(const ModelGradients& grads);

struct TrainConfig {
  int batch_size = 32;
  int epochs = 7;
  double learning_rate = 1e-5;
  std::uint64_t seed = 0;
  bool shuffle = true;
  bool freeze_circuit = false;
  int threads = 1;

  void Validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;  // mean per-example loss seen during the epoch
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double val_mcc = 0.0;

  bool operator==(const EpochRecord&) const = default;
};

struct TrainResult {
  HybridModel model;
  AdamState optimizer;
  std::vector<EpochRecord> history;
};

// Fixed-epoch mini-batch Adam. The final short batch is kept. Shuffling uses
// DeriveSeed(cfg.seed, "shuffle").
TrainResult Train(HybridModel model, const Dataset& train_set,
                  const Dataset& val_set, const TrainConfig& cfg);

nlohmann::json HistoryToJson(std::span<const EpochRecord> history);

// confusion[actual][predicted].
using Confusion = std::array<std::array<std::int64_t, 2>, 2>;

// Matthews correlation. Returns 0 when any marginal is empty; throws
// DomainError on negative counts or an all-zero matrix.
double Mcc(const Confusion& confusion);

struct EvalReport {
  double accuracy = 0.0;
  double mcc = 0.0;
  Confusion confusion{};
  double loss = 0.0;

  bool operator==(const EvalReport&) const = default;
};

EvalReport Evaluate(const HybridModel& model, const Dataset& dataset,
                    int threads = 1);
nlohmann::json EvalReportToJson(const EvalReport& report);

// Binary checkpoint, little-endian:
//   "VQCL" | version u16 | N u32 | pad f64 | n u16 | L u16 | axis u8 |
//   angles f64[L*n] | weights f64[2*n] | biases f64[2] | adam flag u8 |
//   [step u64 | lr f64 | beta1 f64 | beta2 f64 | eps f64 |
//    first moments f64[P] | second moments f64[P]]
// with P = L*n + 2*n + 2 and moments in the order angles, weights, biases.
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct Checkpoint {
  HybridModel model;
  std::optional<AdamState> optimizer;
};

std::vector<std::uint8_t> SerializeCheckpoint(
    const HybridModel& model, const std::optional<AdamState>& optimizer);
Checkpoint DeserializeCheckpoint(std::span<const std::uint8_t> bytes);

void SaveCheckpoint(const std::filesystem::path& path, const HybridModel& model,
                    const std::optional<AdamState>& optimizer = std::nullopt);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace vqcl

#endif  // VQCL_MODEL_H_
