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

#include "vqcl/ansatz.h"

#include <cmath>
#include <numbers>
#include <string>

#include "vqcl/errors.h"
#include "vqcl/parallel.h"
#include "vqcl/random.h"

namespace vqcl {

void AnsatzConfig::Validate() const {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw CapacityError("ansatz qubit count " + std::to_string(num_qubits) +
                        " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (num_layers < 1) throw DomainError("ansatz needs at least one layer");
}

AnsatzParams::AnsatzParams(int num_layers, int num_qubits)
    : num_layers_(num_layers),
      num_qubits_(num_qubits),
      angles_(static_cast<std::size_t>(num_layers) * num_qubits, 0.0) {}

AnsatzParams::AnsatzParams(int num_layers, int num_qubits,
                           std::vector<double> angles)
    : num_layers_(num_layers),
      num_qubits_(num_qubits),
      angles_(std::move(angles)) {
  if (num_layers < 0 || num_qubits < 0 ||
      angles_.size() != static_cast<std::size_t>(num_layers) * num_qubits) {
    throw ShapeError("angle matrix has " + std::to_string(angles_.size()) +
                     " entries, expected " + std::to_string(num_layers) + "x" +
                     std::to_string(num_qubits));
  }
  for (const double a : angles_) {
    if (!std::isfinite(a)) throw DomainError("ansatz angle is not finite");
  }
}

AnsatzParams InitParams(const AnsatzConfig& cfg, std::uint64_t seed) {
  cfg.Validate();
  constexpr double kTwoPi = 2 * std::numbers::pi;
  Rng rng(seed);
  AnsatzParams params(cfg.num_layers, cfg.num_qubits);
  for (double& a : params.flat()) {
    a = UniformUnit(rng) * kTwoPi;
    if (a >= kTwoPi) a = 0.0;
  }
  return params;
}

QuantumState& ApplyEntanglingLayerInPlace(QuantumState& state,
                                          std::span<const double> angles,
                                          Axis axis) {
  const int n = state.num_qubits();
  if (angles.size() != static_cast<std::size_t>(n)) {
    throw ShapeError("layer has " + std::to_string(angles.size()) +
                     " angles for " + std::to_string(n) + " qubits");
  }
  for (int q = 0; q < n; ++q) state.ApplyRotation(q, axis, angles[q]);
  if (n == 2) {
    state.ApplyCnot(0, 1);
  } else if (n > 2) {
    for (int q = 0; q < n; ++q) state.ApplyCnot(q, (q + 1) % n);
  }
  return state;
}

QuantumState ApplyEntanglingLayer(QuantumState state,
                                  std::span<const double> angles, Axis axis) {
  ApplyEntanglingLayerInPlace(state, angles, axis);
  return state;
}

QuantumState& ApplyAnsatzInPlace(QuantumState& state,
                                 const AnsatzParams& params, Axis axis) {
  if (params.num_qubits() != state.num_qubits()) {
    throw ShapeError("ansatz acts on " + std::to_string(params.num_qubits()) +
                     " qubits, state has " + std::to_string(state.num_qubits()));
  }
  for (int l = 0; l < params.num_layers(); ++l) {
    ApplyEntanglingLayerInPlace(state, params.row(l), axis);
  }
  return state;
}

std::vector<double> MeasureAllZ(const QuantumState& state) {
  std::vector<double> z(state.num_qubits());
  for (int q = 0; q < state.num_qubits(); ++q) z[q] = state.ExpectZ(q);
  return z;
}

void CheckCircuitShapes(const AnsatzParams& params, const AnsatzConfig& cfg,
                        const EncodingConfig& enc_cfg) {
  cfg.Validate();
  if (params.num_layers() != cfg.num_layers ||
      params.num_qubits() != cfg.num_qubits) {
    throw ShapeError("ansatz params are " + std::to_string(params.num_layers()) +
                     "x" + std::to_string(params.num_qubits()) +
                     ", config expects " + std::to_string(cfg.num_layers) +
                     "x" + std::to_string(cfg.num_qubits));
  }
  if (enc_cfg.num_qubits() != cfg.num_qubits) {
    throw ShapeError("encoding produces " +
                     std::to_string(enc_cfg.num_qubits()) +
                     " qubits, ansatz expects " +
                     std::to_string(cfg.num_qubits));
  }
}

std::vector<double> CircuitForwardFromState(QuantumState state,
                                            const AnsatzParams& params,
                                            const AnsatzConfig& cfg) {
  ApplyAnsatzInPlace(state, params, cfg.rotation_axis);
  return MeasureAllZ(state);
}

std::vector<double> CircuitForward(std::span<const double> x,
                                   const AnsatzParams& params,
                                   const AnsatzConfig& cfg,
                                   const EncodingConfig& enc_cfg) {
  CheckCircuitShapes(params, cfg, enc_cfg);
  return CircuitForwardFromState(AmplitudeEncode(x, enc_cfg), params, cfg);
}

std::vector<std::vector<double>> CircuitForwardBatch(
    std::span<const std::vector<double>> xs, const AnsatzParams& params,
    const AnsatzConfig& cfg, const EncodingConfig& enc_cfg, int threads) {
  CheckCircuitShapes(params, cfg, enc_cfg);
  std::vector<std::vector<double>> out(xs.size());
  ParallelFor(xs.size(), threads, [&](std::size_t i) {
    out[i] = CircuitForwardFromState(AmplitudeEncode(xs[i], enc_cfg), params,
                                     cfg);
  });
  return out;
}

}  // namespace vqcl
