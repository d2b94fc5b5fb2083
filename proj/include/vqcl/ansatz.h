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

#ifndef VQCL_ANSATZ_H_
#define VQCL_ANSATZ_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vqcl/encoding.h"
#include "vqcl/statevector.h"

namespace vqcl {

struct AnsatzConfig {
  int num_qubits = 1;
  int num_layers = 6;
  Axis rotation_axis = Axis::kX;

  int num_params() const { return num_qubits * num_layers; }
  void Validate() const;
};

// Rotation angles of the entangling layers, stored row-major as
// [layer][qubit].
class AnsatzParams {
 public:
  AnsatzParams() = default;
  AnsatzParams(int num_layers, int num_qubits);
  // Throws ShapeError when angles.size() != num_layers * num_qubits and
  // DomainError on non-finite entries.
  AnsatzParams(int num_layers, int num_qubits, std::vector<double> angles);

  int num_layers() const { return num_layers_; }
  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return angles_.size(); }

  double& at(int layer, int qubit) { return angles_[Index(layer, qubit)]; }
  double at(int layer, int qubit) const { return angles_[Index(layer, qubit)]; }
  std::span<const double> row(int layer) const {
    return std::span<const double>(angles_).subspan(
        static_cast<std::size_t>(layer) * num_qubits_, num_qubits_);
  }

  std::span<double> flat() { return angles_; }
  std::span<const double> flat() const { return angles_; }

  bool operator==(const AnsatzParams&) const = default;

 private:
  std::size_t Index(int layer, int qubit) const {
    return static_cast<std::size_t>(layer) * num_qubits_ + qubit;
  }

  int num_layers_ = 0;
  int num_qubits_ = 0;
  std::vector<double> angles_;
};

// Angles i.i.d. uniform on [0, 2*pi) from a generator seeded with `seed`.
AnsatzParams InitParams(const AnsatzConfig& cfg, std::uint64_t seed);

// One basic entangling layer: a rotation about `axis` by angles[q] on every
// qubit q in ascending order, then the CNOT ring (0,1), (1,2), ...,
// (n-2,n-1), (n-1,0). Two qubits get the single CNOT (0,1); one qubit gets
// none.
QuantumState& ApplyEntanglingLayerInPlace(QuantumState& state,
                                          std::span<const double> angles,
                                          Axis axis);
QuantumState ApplyEntanglingLayer(QuantumState state,
                                  std::span<const double> angles, Axis axis);

// All layers in order on an already-encoded state.
QuantumState& ApplyAnsatzInPlace(QuantumState& state,
                                 const AnsatzParams& params, Axis axis);

// <Z_q> for every qubit, q ascending.
std::vector<double> MeasureAllZ(const QuantumState& state);

// Encoded state -> layers -> Pauli-Z expectations. The state is taken by value.
std::vector<double> CircuitForwardFromState(QuantumState state,
                                            const AnsatzParams& params,
                                            const AnsatzConfig& cfg);

std::vector<double> CircuitForward(std::span<const double> x,
                                   const AnsatzParams& params,
                                   const AnsatzConfig& cfg,
                                   const EncodingConfig& enc_cfg);

// Forward pass over many inputs; identical to calling CircuitForward on each.
std::vector<std::vector<double>> CircuitForwardBatch(
    std::span<const std::vector<double>> xs, const AnsatzParams& params,
    const AnsatzConfig& cfg, const EncodingConfig& enc_cfg, int threads = 1);

// Throws ShapeError if the three pieces do not fit together.
void CheckCircuitShapes(const AnsatzParams& params, const AnsatzConfig& cfg,
                        const EncodingConfig& enc_cfg);

}  // namespace vqcl

#endif  // VQCL_ANSATZ_H_
