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

#include "vqcl/statevector.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "vqcl/errors.h"

namespace vqcl {
namespace {

constexpr double kLoadNormTolerance = 1e-9;

int QubitsForLength(std::size_t length) {
  if (length < 2 || !std::has_single_bit(length)) {
    throw EncodingError("amplitude count " + std::to_string(length) +
                        " is not a power of two >= 2");
  }
  const int n = std::countr_zero(length);
  if (n > kMaxQubits) {
    throw CapacityError("state of " + std::to_string(n) +
                        " qubits exceeds the limit of " +
                        std::to_string(kMaxQubits));
  }
  return n;
}

}  // namespace

std::string_view AxisName(Axis axis) {
  switch (axis) {
    case Axis::kX:
      return "X";
    case Axis::kY:
      return "Y";
    case Axis::kZ:
      return "Z";
  }
  return "?";
}

Axis ParseAxis(std::string_view name) {
  if (name == "X" || name == "x") return Axis::kX;
  if (name == "Y" || name == "y") return Axis::kY;
  if (name == "Z" || name == "z") return Axis::kZ;
  throw DomainError("unknown rotation axis '" + std::string(name) + "'");
}

QuantumState QuantumState::Zero(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw CapacityError("qubit count " + std::to_string(num_qubits) +
                        " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  std::vector<Complex> amplitudes(std::size_t{1} << num_qubits);
  amplitudes[0] = 1.0;
  return QuantumState(num_qubits, std::move(amplitudes));
}

QuantumState QuantumState::FromReal(std::span<const double> values) {
  std::vector<Complex> amplitudes(values.begin(), values.end());
  return FromAmplitudes(std::move(amplitudes));
}

QuantumState QuantumState::FromAmplitudes(std::vector<Complex> amplitudes) {
  const int n = QubitsForLength(amplitudes.size());
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (!std::isfinite(norm2) ||
      std::abs(std::sqrt(norm2) - 1.0) > kLoadNormTolerance) {
    throw EncodingError("amplitudes are not normalized (norm " +
                        std::to_string(std::sqrt(norm2)) + ")");
  }
  return QuantumState(n, std::move(amplitudes));
}

void QuantumState::CheckQubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) {
    throw IndexError("qubit " + std::to_string(qubit) + " out of range for " +
                     std::to_string(num_qubits_) + "-qubit state");
  }
}

QuantumState& QuantumState::ApplyRotation(int qubit, Axis axis, double theta) {
  CheckQubit(qubit);
  if (!std::isfinite(theta)) throw DomainError("rotation angle is not finite");
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  // 2x2 unitary [[u00, u01], [u10, u11]] acting on (|..0..>, |..1..>).
  Complex u00, u01, u10, u11;
  switch (axis) {
    case Axis::kX:
      u00 = c, u01 = Complex(0, -s), u10 = Complex(0, -s), u11 = c;
      break;
    case Axis::kY:
      u00 = c, u01 = -s, u10 = s, u11 = c;
      break;
    case Axis::kZ:
      u00 = Complex(c, -s), u01 = 0, u10 = 0, u11 = Complex(c, s);
      break;
  }
  const std::size_t mask = Mask(qubit);
  const std::size_t dim = amplitudes_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const Complex a = amplitudes_[i];
    const Complex b = amplitudes_[i | mask];
    amplitudes_[i] = u00 * a + u01 * b;
    amplitudes_[i | mask] = u10 * a + u11 * b;
  }
  return *this;
}

QuantumState& QuantumState::ApplyCnot(int control, int target) {
  CheckQubit(control);
  CheckQubit(target);
  if (control == target) {
    throw DomainError("CNOT control and target must differ (both " +
                      std::to_string(control) + ")");
  }
  const std::size_t cmask = Mask(control);
  const std::size_t tmask = Mask(target);
  const std::size_t dim = amplitudes_.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & cmask) && !(i & tmask)) {
      std::swap(amplitudes_[i], amplitudes_[i | tmask]);
    }
  }
  return *this;
}

double QuantumState::ExpectZ(int qubit) const {
  CheckQubit(qubit);
  const std::size_t mask = Mask(qubit);
  double value = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    const double p = std::norm(amplitudes_[i]);
    value += (i & mask) ? -p : p;
  }
  return std::clamp(value, -1.0, 1.0);
}

double QuantumState::SquaredNorm() const {
  double norm2 = 0.0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  return norm2;
}

QuantumState ZeroState(int num_qubits) { return QuantumState::Zero(num_qubits); }

QuantumState LoadAmplitudes(std::span<const double> values) {
  return QuantumState::FromReal(values);
}

QuantumState ApplyRotation(QuantumState state, int qubit, Axis axis,
                           double theta) {
  state.ApplyRotation(qubit, axis, theta);
  return state;
}

QuantumState ApplyCnot(QuantumState state, int control, int target) {
  state.ApplyCnot(control, target);
  return state;
}

double ExpectZ(const QuantumState& state, int qubit) {
  return state.ExpectZ(qubit);
}

}  // namespace vqcl
