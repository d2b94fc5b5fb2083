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

#include "vqcl/gradients.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vqcl/errors.h"
#include "vqcl/parallel.h"

namespace vqcl {
namespace {

// Fills column-by-parameter entries using a symmetric difference with the
// given step and divisor.
CircuitJacobian SymmetricDifference(const QuantumState& encoded,
                                    const AnsatzParams& params,
                                    const AnsatzConfig& cfg, double step,
                                    double divisor, int threads,
                                    std::atomic<std::size_t>* counter) {
  const std::size_t num_params = params.size();
  const std::size_t n = static_cast<std::size_t>(cfg.num_qubits);
  CircuitJacobian jac(num_params, n);
  ParallelFor(num_params, threads, [&](std::size_t j) {
    AnsatzParams shifted = params;
    shifted.flat()[j] = params.flat()[j] + step;
    const auto plus = CircuitForwardFromState(encoded, shifted, cfg);
    shifted.flat()[j] = params.flat()[j] - step;
    const auto minus = CircuitForwardFromState(encoded, shifted, cfg);
    if (counter != nullptr) counter->fetch_add(2, std::memory_order_relaxed);
    for (std::size_t k = 0; k < n; ++k) {
      jac.at(j, k) = (plus[k] - minus[k]) / divisor;
    }
  });
  return jac;
}

}  // namespace

CircuitJacobian ParameterShiftJacobian(std::span<const double> x,
                                       const AnsatzParams& params,
                                       const AnsatzConfig& cfg,
                                       const EncodingConfig& enc_cfg,
                                       const ShiftOptions& options) {
  CheckCircuitShapes(params, cfg, enc_cfg);
  const QuantumState encoded = AmplitudeEncode(x, enc_cfg);
  return SymmetricDifference(encoded, params, cfg, options.shift, 2.0,
                             options.threads, options.forward_counter);
}

CircuitJacobian FiniteDiffJacobian(std::span<const double> x,
                                   const AnsatzParams& params,
                                   const AnsatzConfig& cfg,
                                   const EncodingConfig& enc_cfg,
                                   double epsilon) {
  if (!(epsilon >= 1e-8 && epsilon <= 1e-2)) {
    throw DomainError("finite-difference epsilon " + std::to_string(epsilon) +
                      " outside [1e-8, 1e-2]");
  }
  CheckCircuitShapes(params, cfg, enc_cfg);
  const QuantumState encoded = AmplitudeEncode(x, enc_cfg);
  return SymmetricDifference(encoded, params, cfg, epsilon, 2 * epsilon, 1,
                             nullptr);
}

double MaxAbsDifference(const CircuitJacobian& a, const CircuitJacobian& b) {
  if (a.num_params() != b.num_params() || a.num_outputs() != b.num_outputs()) {
    throw ShapeError("jacobian shapes differ");
  }
  double worst = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    worst = std::max(worst, std::abs(ea[i] - eb[i]));
  }
  return worst;
}

}  // namespace vqcl
