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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.h"
#include "vqcl/errors.h"

namespace vqcl {
namespace {

using std::numbers::pi;
constexpr double kSqrtHalf = 0.70710678118654752440;

void ExpectAmplitudes(const QuantumState& s, const std::vector<Complex>& want,
                      double tol) {
  ASSERT_EQ(s.dim(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(s[i].real(), want[i].real(), tol) << "index " << i;
    EXPECT_NEAR(s[i].imag(), want[i].imag(), tol) << "index " << i;
  }
}

QuantumState RandomState(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<Complex> a(std::size_t{1} << n);
  double norm2 = 0;
  for (auto& v : a) {
    v = Complex(normal(rng), normal(rng));
    norm2 += std::norm(v);
  }
  for (auto& v : a) v /= std::sqrt(norm2);
  return QuantumState::FromAmplitudes(a);
}

TEST(ZeroStateTest, Amplitudes) {
  ExpectAmplitudes(ZeroState(1), {1, 0}, 0);
  ExpectAmplitudes(ZeroState(2), {1, 0, 0, 0}, 0);
  const QuantumState ten = ZeroState(10);
  EXPECT_EQ(ten.dim(), 1024u);
  EXPECT_EQ(ten[0], Complex(1, 0));
  for (std::size_t i = 1; i < ten.dim(); ++i) EXPECT_EQ(ten[i], Complex(0, 0));
}

TEST(ZeroStateTest, CapacityGuard) {
  EXPECT_THROW(ZeroState(0), CapacityError);
  EXPECT_THROW(ZeroState(25), CapacityError);
}

TEST(RotationTest, Examples) {
  ExpectAmplitudes(ApplyRotation(ZeroState(1), 0, Axis::kX, 0), {1, 0}, 0);
  ExpectAmplitudes(ApplyRotation(ZeroState(1), 0, Axis::kX, pi), {0, {0, -1}},
                   1e-15);
  ExpectAmplitudes(ApplyRotation(ZeroState(1), 0, Axis::kX, pi / 2),
                   {kSqrtHalf, {0, -kSqrtHalf}}, 1e-15);
}

TEST(RotationTest, Errors) {
  EXPECT_THROW(ApplyRotation(ZeroState(2), 2, Axis::kX, 0.1), IndexError);
  EXPECT_THROW(ApplyRotation(ZeroState(2), -1, Axis::kX, 0.1), IndexError);
  EXPECT_THROW(ApplyRotation(ZeroState(2), 0, Axis::kY, NAN), DomainError);
  EXPECT_THROW(ApplyRotation(ZeroState(2), 0, Axis::kZ, INFINITY), DomainError);
}

TEST(CnotTest, TruthTable) {
  // |10> is index 2 with qubit 0 as the most significant bit.
  const auto ket10 = QuantumState::FromReal(std::vector<double>{0, 0, 1, 0});
  ExpectAmplitudes(ApplyCnot(ket10, 0, 1), {0, 0, 0, 1}, 0);
  ExpectAmplitudes(ApplyCnot(ZeroState(2), 0, 1), {1, 0, 0, 0}, 0);
  const auto plus = QuantumState::FromReal(std::vector<double>{kSqrtHalf, 0, kSqrtHalf, 0});
  ExpectAmplitudes(ApplyCnot(plus, 0, 1), {kSqrtHalf, 0, 0, kSqrtHalf}, 0);
}

TEST(CnotTest, Errors) {
  EXPECT_THROW(ApplyCnot(ZeroState(2), 1, 1), DomainError);
  EXPECT_THROW(ApplyCnot(ZeroState(2), 0, 2), IndexError);
}

TEST(ExpectZTest, Examples) {
  EXPECT_DOUBLE_EQ(ExpectZ(ZeroState(1), 0), 1.0);
  EXPECT_NEAR(ExpectZ(ApplyRotation(ZeroState(1), 0, Axis::kX, pi), 0), -1.0, 1e-15);
  EXPECT_NEAR(ExpectZ(ApplyRotation(ZeroState(1), 0, Axis::kX, pi / 2), 0), 0.0, 1e-12);
  EXPECT_THROW(ExpectZ(ZeroState(1), 1), IndexError);
}

TEST(LoadAmplitudesTest, ValidatesInput) {
  ExpectAmplitudes(LoadAmplitudes(std::vector<double>{0.6, 0.8}), {0.6, 0.8}, 0);
  EXPECT_THROW(LoadAmplitudes(std::vector<double>{1, 0, 0}), EncodingError);
  EXPECT_THROW(LoadAmplitudes(std::vector<double>{1}), EncodingError);
  EXPECT_THROW(LoadAmplitudes(std::vector<double>{1, 1}), EncodingError);
  EXPECT_NO_THROW(LoadAmplitudes(std::vector<double>{1 + 5e-10, 0}));
}

TEST(StatevectorPropertyTest, NormConservedUnderRandomCircuits) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-4 * pi, 4 * pi);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    QuantumState s = RandomState(n, rng);
    for (int g = 0; g < 60; ++g) {
      const int q = static_cast<int>(rng() % n);
      if (n > 1 && rng() % 2) {
        int t = static_cast<int>(rng() % (n - 1));
        if (t >= q) ++t;
        s.ApplyCnot(q, t);
      } else {
        s.ApplyRotation(q, static_cast<Axis>(rng() % 3), angle(rng));
      }
      ASSERT_LT(std::abs(s.SquaredNorm() - 1.0), 1e-10);
      ASSERT_GE(s.ExpectZ(q), -1.0);
      ASSERT_LE(s.ExpectZ(q), 1.0);
    }
  }
}

TEST(StatevectorPropertyTest, RotationInverseRestoresState) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> angle(-2 * pi, 2 * pi);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 5;
    const QuantumState s = RandomState(n, rng);
    const int q = static_cast<int>(rng() % n);
    const Axis axis = static_cast<Axis>(trial % 3);
    const double theta = angle(rng);
    const QuantumState back =
        ApplyRotation(ApplyRotation(s, q, axis, theta), q, axis, -theta);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      ASSERT_NEAR(std::abs(back[i] - s[i]), 0.0, 1e-12);
    }
  }
}

TEST(StatevectorPropertyTest, CnotIsInvolution) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const QuantumState s = RandomState(n, rng);
    const int c = static_cast<int>(rng() % n);
    const int t = (c + 1 + static_cast<int>(rng() % (n - 1))) % n;
    const QuantumState back = ApplyCnot(ApplyCnot(s, c, t), c, t);
    for (std::size_t i = 0; i < s.dim(); ++i) {
      ASSERT_LE(std::abs(back[i] - s[i]), 1e-15);
    }
  }
}

TEST(StatevectorOracleTest, GatesMatchKroneckerMatrices) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> angle(-pi, pi);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const QuantumState s = RandomState(n, rng);
      const std::vector<oracle::C> psi(s.amplitudes().begin(), s.amplitudes().end());
      for (int q = 0; q < n; ++q) {
        for (const Axis axis : {Axis::kX, Axis::kY, Axis::kZ}) {
          const double theta = angle(rng);
          const auto want = oracle::Apply(
              oracle::OnQubit(n, q, oracle::Rotation(axis, theta)), psi);
          const QuantumState got = ApplyRotation(s, q, axis, theta);
          for (std::size_t i = 0; i < want.size(); ++i) {
            ASSERT_LE(std::abs(got[i] - want[i]), 1e-12);
          }
        }
        EXPECT_NEAR(s.ExpectZ(q), oracle::ExpectZ(n, q, psi), 1e-12);
        for (int t = 0; t < n; ++t) {
          if (t == q) continue;
          const auto want = oracle::Apply(oracle::Cnot(n, q, t), psi);
          const QuantumState got = ApplyCnot(s, q, t);
          for (std::size_t i = 0; i < want.size(); ++i) {
            ASSERT_LE(std::abs(got[i] - want[i]), 1e-12);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace vqcl
