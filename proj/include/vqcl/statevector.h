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

#ifndef VQCL_STATEVECTOR_H_
#define VQCL_STATEVECTOR_H_

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace vqcl {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;

enum class Axis { kX, kY, kZ };

std::string_view AxisName(Axis axis);
// Accepts "X"/"Y"/"Z" in either case; throws DomainError otherwise.
Axis ParseAxis(std::string_view name);

// Dense pure state of n qubits.
//
// Basis index convention: qubit 0 is the most significant bit, so for n = 2
// the amplitudes are ordered |00>, |01>, |10>, |11> with the left digit being
// qubit 0.
class QuantumState {
 public:
  // |0...0>. Throws CapacityError unless 1 <= num_qubits <= kMaxQubits.
  static QuantumState Zero(int num_qubits);

  // Real amplitudes; the length must be a power of two (>= 2) and the L2 norm
  // within 1e-9 of one, otherwise EncodingError.
  static QuantumState FromReal(std::span<const double> values);

  // Arbitrary complex amplitudes, same checks as FromReal.
  static QuantumState FromAmplitudes(std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  // In-place gates. Each returns *this so circuits can be chained.
  QuantumState& ApplyRotation(int qubit, Axis axis, double theta);
  QuantumState& ApplyCnot(int control, int target);

  // <Z> on one qubit, clamped to [-1, 1].
  double ExpectZ(int qubit) const;

  double SquaredNorm() const;

 private:
  QuantumState(int num_qubits, std::vector<Complex> amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  void CheckQubit(int qubit) const;
  std::size_t Mask(int qubit) const {
    return std::size_t{1} << (num_qubits_ - 1 - qubit);
  }

  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

// Pure counterparts of the member operations.
QuantumState ZeroState(int num_qubits);
QuantumState LoadAmplitudes(std::span<const double> values);
QuantumState ApplyRotation(QuantumState state, int qubit, Axis axis,
                           double theta);
QuantumState ApplyCnot(QuantumState state, int control, int target);
double ExpectZ(const QuantumState& state, int qubit);

}  // namespace vqcl

#endif  // VQCL_STATEVECTOR_H_
