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

#ifndef VQCL_RANDOM_H_
#define VQCL_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace vqcl {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a master seed and a purpose label,
// e.g. DeriveSeed(seed, "init"), DeriveSeed(seed, "shuffle"),
// DeriveSeed(seed, "shap"). FNV-1a over the label, mixed with the master seed
// through splitmix64.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);

// Uniform double in [0, 1) from the top 53 bits of one engine draw. Unlike
// std::uniform_real_distribution this never returns 1.0.
double UniformUnit(Rng& rng);

}  // namespace vqcl

#endif  // VQCL_RANDOM_H_
