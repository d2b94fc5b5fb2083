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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vqcl/errors.h"

namespace vqcl {
namespace {

using std::numbers::pi;

struct Instance {
  AnsatzConfig cfg;
  EncodingConfig enc;
  AnsatzParams params;
  std::vector<double> x;
};

Instance RandomInstance(int n, int layers, std::mt19937_64& rng) {
  Instance in;
  in.cfg = {n, layers, static_cast<Axis>(rng() % 3)};
  in.enc.feature_dim = std::size_t{1} << n;
  in.params = InitParams(in.cfg, rng());
  std::normal_distribution<double> normal;
  in.x.resize(in.enc.feature_dim);
  for (double& v : in.x) v = normal(rng);
  return in;
}

TEST(ParameterShiftTest, SingleQubitExamples) {
  const AnsatzConfig cfg{1, 1, Axis::kX};
  const EncodingConfig enc{2};
  const std::vector<double> x{1, 0};
  // <Z> = cos(theta), derivative -sin(theta).
  EXPECT_NEAR(ParameterShiftJacobian(x, AnsatzParams(1, 1, {0.0}), cfg, enc).at(0, 0),
              0.0, 1e-15);
  EXPECT_NEAR(ParameterShiftJacobian(x, AnsatzParams(1, 1, {pi / 2}), cfg, enc).at(0, 0),
              -1.0, 1e-15);
}

TEST(ParameterShiftTest, MatchesFiniteDifferences) {
  std::mt19937_64 rng(31);
  const Instance in = RandomInstance(4, 3, rng);
  const auto ps = ParameterShiftJacobian(in.x, in.params, in.cfg, in.enc);
  const auto fd = FiniteDiffJacobian(in.x, in.params, in.cfg, in.enc, 1e-5);
  ASSERT_EQ(ps.num_params(), 12u);
  ASSERT_EQ(ps.num_outputs(), 4u);
  EXPECT_LT(MaxAbsDifference(ps, fd), 1e-6);
}

TEST(ParameterShiftTest, EntriesAreBounded) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = RandomInstance(1 + trial % 4, 1 + trial % 3, rng);
    const auto jac = ParameterShiftJacobian(in.x, in.params, in.cfg, in.enc);
    for (const double v : jac.entries()) {
      ASSERT_TRUE(std::isfinite(v));
      ASSERT_LE(std::abs(v), 1.0 + 1e-12);
    }
  }
}

TEST(ParameterShiftTest, ZRotationsOnOneQubitHaveZeroGradient) {
  const AnsatzConfig cfg{1, 3, Axis::kZ};
  const EncodingConfig enc{2};
  const auto jac = ParameterShiftJacobian(std::vector<double>{0.3, -0.8},
                                          AnsatzParams(3, 1, {0.4, 1.3, 2.9}), cfg, enc);
  for (const double v : jac.entries()) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ParameterShiftTest, UsesExactlyTwoForwardPassesPerParameter) {
  std::mt19937_64 rng(33);
  for (const auto [n, layers] : {std::pair{1, 1}, {3, 2}, {10, 6}}) {
    const Instance in = RandomInstance(n, layers, rng);
    std::atomic<std::size_t> counter{0};
    ShiftOptions options;
    options.forward_counter = &counter;
    ParameterShiftJacobian(in.x, in.params, in.cfg, in.enc, options);
    EXPECT_EQ(counter.load(), static_cast<std::size_t>(2 * n * layers));
  }
}

TEST(ParameterShiftTest, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(34);
  const Instance in = RandomInstance(4, 3, rng);
  ShiftOptions one, four;
  four.threads = 4;
  const auto a = ParameterShiftJacobian(in.x, in.params, in.cfg, in.enc, one);
  const auto b = ParameterShiftJacobian(in.x, in.params, in.cfg, in.enc, four);
  EXPECT_TRUE(std::equal(a.entries().begin(), a.entries().end(), b.entries().begin()));
}

TEST(ParameterShiftTest, WrongShiftIsDetected) {
  std::mt19937_64 rng(35);
  Instance in = RandomInstance(3, 2, rng);
  in.cfg.rotation_axis = Axis::kX;
  ShiftOptions wrong;
  wrong.shift = pi / 3;
  const auto bad = ParameterShiftJacobian(in.x, in.params, in.cfg, in.enc, wrong);
  const auto fd = FiniteDiffJacobian(in.x, in.params, in.cfg, in.enc, 1e-5);
  EXPECT_GT(MaxAbsDifference(bad, fd), 1e-3);
}

TEST(FiniteDiffTest, IdentityCircuitHasZeroGradient) {
  const AnsatzConfig cfg{2, 2, Axis::kX};
  const EncodingConfig enc{4};
  for (const double eps : {1e-8, 1e-5, 1e-2}) {
    const auto jac = FiniteDiffJacobian(std::vector<double>{1, 0, 0, 0}, AnsatzParams(2, 2),
                                        cfg, enc, eps);
    for (const double v : jac.entries()) EXPECT_NEAR(v, 0.0, 1e-9);
  }
}

TEST(FiniteDiffTest, SingleQubitSlope) {
  const auto jac = FiniteDiffJacobian(std::vector<double>{1, 0}, AnsatzParams(1, 1, {pi / 2}),
                                      {1, 1, Axis::kX}, {2}, 1e-5);
  EXPECT_NEAR(jac.at(0, 0), -1.0, 1e-8);
}

TEST(FiniteDiffTest, EpsilonRange) {
  const AnsatzConfig cfg{1, 1, Axis::kX};
  const std::vector<double> x{1, 0};
  EXPECT_THROW(FiniteDiffJacobian(x, AnsatzParams(1, 1), cfg, {2}, 1e-9), DomainError);
  EXPECT_THROW(FiniteDiffJacobian(x, AnsatzParams(1, 1), cfg, {2}, 0.1), DomainError);
}

TEST(GradientPropertyTest, AgreementOnRandomInstances) {
  std::mt19937_64 rng(36);
  constexpr double kEps = 1e-5;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Instance in = RandomInstance(1 + static_cast<int>(rng() % 6),
                                       1 + static_cast<int>(rng() % 4), rng);
    const auto ps = ParameterShiftJacobian(in.x, in.params, in.cfg, in.enc);
    const auto fd = FiniteDiffJacobian(in.x, in.params, in.cfg, in.enc, kEps);
    worst = std::max(worst, MaxAbsDifference(ps, fd));
  }
  EXPECT_LT(worst, std::max(1e-6, 10 * kEps * kEps));
}

}  // namespace
}  // namespace vqcl
