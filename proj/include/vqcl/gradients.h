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

#ifndef VQCL_GRADIENTS_H_
#define VQCL_GRADIENTS_H_

#include <atomic>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "vqcl/ansatz.h"
#include "vqcl/encoding.h"

namespace vqcl {

// d<Z_k>/d theta_j for every ansatz angle j (flat row-major index
// layer * n + qubit) and every measured qubit k.
class CircuitJacobian {
 public:
  CircuitJacobian() = default;
  CircuitJacobian(std::size_t num_params, std::size_t num_outputs)
      : num_params_(num_params),
        num_outputs_(num_outputs),
        entries_(num_params * num_outputs, 0.0) {}

  std::size_t num_params() const { return num_params_; }
  std::size_t num_outputs() const { return num_outputs_; }

  double& at(std::size_t param, std::size_t output) {
    return entries_[param * num_outputs_ + output];
  }
  double at(std::size_t param, std::size_t output) const {
    return entries_[param * num_outputs_ + output];
  }
  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t num_params_ = 0;
  std::size_t num_outputs_ = 0;
  std::vector<double> entries_;
};

struct ShiftOptions {
  // Exact for RX/RY/RZ only at pi/2; anything else is for testing checkers.
  double shift = std::numbers::pi / 2;
  int threads = 1;
  // Incremented once per simulated forward pass when non-null.
  std::atomic<std::size_t>* forward_counter = nullptr;
};

// Parameter-shift rule, [f(theta_j + s) - f(theta_j - s)] / 2 per angle. Uses
// exactly 2 * L * n forward passes; the input is encoded once.
CircuitJacobian ParameterShiftJacobian(std::span<const double> x,
                                       const AnsatzParams& params,
                                       const AnsatzConfig& cfg,
                                       const EncodingConfig& enc_cfg,
                                       const ShiftOptions& options = {});

// Central differences [f(theta_j + eps) - f(theta_j - eps)] / (2 eps).
// eps must lie in [1e-8, 1e-2]. Verification oracle only.
CircuitJacobian FiniteDiffJacobian(std::span<const double> x,
                                   const AnsatzParams& params,
                                   const AnsatzConfig& cfg,
                                   const EncodingConfig& enc_cfg,
                                   double epsilon);

double MaxAbsDifference(const CircuitJacobian& a, const CircuitJacobian& b);

}  // namespace vqcl

#endif  // VQCL_GRADIENTS_H_
