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

#include "vqcl/encoding.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "vqcl/errors.h"

namespace vqcl {

namespace {
constexpr double kMinNorm = 1e-12;
}  // namespace

std::string_view PadOrderName(PadOrder order) {
  return order == PadOrder::kPadThenNormalize ? "pad_then_normalize"
                                              : "normalize_then_pad";
}

PadOrder ParsePadOrder(std::string_view name) {
  if (name == "pad_then_normalize") return PadOrder::kPadThenNormalize;
  if (name == "normalize_then_pad") return PadOrder::kNormalizeThenPad;
  throw DomainError("unknown pad order '" + std::string(name) + "'");
}

std::size_t EncodingConfig::target_dim() const {
  return std::bit_ceil(std::max<std::size_t>(feature_dim, 2));
}

int EncodingConfig::num_qubits() const {
  return std::countr_zero(target_dim());
}

void EncodingConfig::Validate() const {
  if (feature_dim < 1) throw DomainError("feature_dim must be positive");
  if (!std::isfinite(pad_value)) throw DomainError("pad_value must be finite");
  if (feature_dim > (std::size_t{1} << kMaxQubits)) {
    throw CapacityError("feature_dim " + std::to_string(feature_dim) +
                        " needs more than " + std::to_string(kMaxQubits) +
                        " qubits");
  }
}

std::vector<double> PadFeatures(std::span<const double> x,
                                const EncodingConfig& cfg) {
  if (x.size() != cfg.feature_dim) {
    throw ShapeError("feature vector has " + std::to_string(x.size()) +
                     " entries, expected " + std::to_string(cfg.feature_dim));
  }
  std::vector<double> padded(cfg.target_dim(), cfg.pad_value);
  std::copy(x.begin(), x.end(), padded.begin());
  return padded;
}

std::vector<double> Normalize(std::span<const double> x) {
  double norm2 = 0.0;
  for (const double v : x) norm2 += v * v;
  const double norm = std::sqrt(norm2);
  if (!(norm > kMinNorm) || !std::isfinite(norm)) {
    throw DegenerateInputError("cannot normalize a vector of norm " +
                               std::to_string(norm));
  }
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v /= norm;
  return out;
}

std::vector<double> EncodeAmplitudes(std::span<const double> x,
                                     const EncodingConfig& cfg) {
  cfg.Validate();
  std::vector<double> padded = PadFeatures(x, cfg);
  // Reject a zero raw vector before padding.
  const std::vector<double> unit = Normalize(x);
  if (cfg.order == PadOrder::kNormalizeThenPad) {
    std::copy(unit.begin(), unit.end(), padded.begin());
  }
  return Normalize(padded);
}

QuantumState AmplitudeEncode(std::span<const double> x,
                             const EncodingConfig& cfg) {
  return QuantumState::FromReal(EncodeAmplitudes(x, cfg));
}

}  // namespace vqcl
