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

#ifndef VQCL_ENCODING_H_
#define VQCL_ENCODING_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "vqcl/statevector.h"

namespace vqcl {

inline constexpr double kDefaultPadValue = 0.01;

// Order in which padding and L2 normalization are applied.
//   kPadThenNormalize: pad the raw vector, then normalize the whole thing.
//   kNormalizeThenPad: normalize the raw vector, pad, then renormalize so the
//                      result is still a valid state.
enum class PadOrder { kPadThenNormalize, kNormalizeThenPad };

std::string_view PadOrderName(PadOrder order);
PadOrder ParsePadOrder(std::string_view name);

struct EncodingConfig {
  std::size_t feature_dim = 0;
  double pad_value = kDefaultPadValue;
  PadOrder order = PadOrder::kPadThenNormalize;

  // Smallest power of two >= feature_dim (and >= 2, one qubit minimum).
  std::size_t target_dim() const;
  int num_qubits() const;

  // Throws DomainError / CapacityError on an unusable configuration.
  void Validate() const;
};

std::vector<double> PadFeatures(std::span<const double> x,
                                const EncodingConfig& cfg);

// x / ||x||_2. Throws DegenerateInputError when ||x||_2 <= 1e-12.
std::vector<double> Normalize(std::span<const double> x);

// The real amplitude vector that AmplitudeEncode loads.
std::vector<double> EncodeAmplitudes(std::span<const double> x,
                                     const EncodingConfig& cfg);

QuantumState AmplitudeEncode(std::span<const double> x,
                             const EncodingConfig& cfg);

}  // namespace vqcl

#endif  // VQCL_ENCODING_H_
