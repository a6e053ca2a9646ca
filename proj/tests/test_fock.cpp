// Copyright 2026 The coolopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coolopt/error.hpp"
#include "coolopt/fock.hpp"
#include "oracles.hpp"

namespace coolopt::fock {
namespace {

using testing::max_abs;

using linalg::cplx;

TEST(SpaceSpec, ValidatesDimensions) {
  EXPECT_EQ(SpaceSpec(2, 10).dim(), 20);
  EXPECT_EQ(SpaceSpec(4, 10).dim(), 40);
  EXPECT_THROW(SpaceSpec(1, 10), InvalidArgument);
  EXPECT_THROW(SpaceSpec(5, 10), InvalidArgument);
  EXPECT_THROW(SpaceSpec(2, 1), InvalidArgument);
  EXPECT_THROW(SpaceSpec(2, 65), InvalidArgument);
}

TEST(Annihilator, TwoLevel) {
  CMat expected = CMat::Zero(2, 2);
  expected(0, 1) = 1.0;
  EXPECT_EQ(annihilator(2), expected);
}

TEST(Annihilator, KillsVacuum) {
  linalg::CVec vac = linalg::CVec::Zero(6);
  vac(0) = 1.0;
  EXPECT_EQ((annihilator(6) * vac).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Annihilator, NumberOperatorIdentity) {
  const CMat a = annihilator(10);
  const CMat n = a.adjoint() * a;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      EXPECT_NEAR(std::abs(n(i, j) - (i == j ? cplx(i) : cplx(0.0))), 0.0, 1e-14);
    }
  }
  EXPECT_LT(max_abs(number_op(10) - n), 1e-14);
}

TEST(PositionOp, TwoLevelIsPauliX) {
  CMat expected(2, 2);
  expected << 0.0, 1.0, 1.0, 0.0;
  EXPECT_EQ(position_op(2), expected);
}

TEST(PositionOp, HermitianAndSymmetricSpectrum) {
  for (int d : {2, 5, 10, 17}) {
    const CMat x = position_op(d);
    EXPECT_EQ(linalg::hermitian_defect(x), 0.0);
    const auto e = linalg::eigh(x);
    for (int k = 0; k < d; ++k) EXPECT_NEAR(e.values(k), -e.values(d - 1 - k), 1e-12);
  }
}

TEST(LevelOp, Projectors) {
  CMat gg = CMat::Zero(2, 2);
  gg(0, 0) = 1.0;
  EXPECT_EQ(level_op(2, 0, 0), gg);
  CMat eg = CMat::Zero(2, 2);
  eg(1, 0) = 1.0;
  EXPECT_EQ(level_op(2, 1, 0), eg);
}

TEST(LevelOp, Composition) {
  EXPECT_EQ(level_op(4, 3, 2) * level_op(4, 2, 1), level_op(4, 3, 1));
  EXPECT_EQ(max_abs(level_op(4, 3, 2) * level_op(4, 1, 1)), 0.0);
}

TEST(LevelOp, RejectsOutOfRange) {
  EXPECT_THROW(level_op(2, 2, 0), InvalidArgument);
  EXPECT_THROW(level_op(3, 0, -1), InvalidArgument);
}

TEST(Embed, NumberOperator) {
  const SpaceSpec s(3, 5);
  EXPECT_EQ(embed(CMat::Identity(3, 3), number_op(5), s), phonon_number(s));
}

TEST(Embed, DisjointFactorsCommute) {
  const SpaceSpec s(2, 6);
  const CMat a = embed(level_op(2, 1, 1), CMat::Identity(6, 6), s);
  const CMat b = embed(CMat::Identity(2, 2), position_op(6), s);
  EXPECT_EQ(max_abs(a * b - b * a), 0.0);
}

TEST(Embed, TraceIsMultiplicative) {
  std::mt19937 rng(21);
  const SpaceSpec s(3, 4);
  const CMat a = testing::random_complex(3, 3, rng);
  const CMat b = testing::random_complex(4, 4, rng);
  EXPECT_LT(std::abs(embed(a, b, s).trace() - a.trace() * b.trace()), 1e-12);
}

TEST(Embed, ProductOfEmbeddings) {
  std::mt19937 rng(22);
  const SpaceSpec s(2, 3);
  const CMat a = testing::random_complex(2, 2, rng), c = testing::random_complex(2, 2, rng);
  const CMat b = testing::random_complex(3, 3, rng), d = testing::random_complex(3, 3, rng);
  EXPECT_LT(max_abs(embed(a, b, s) * embed(c, d, s) - embed(a * c, b * d, s)), 1e-12);
}

TEST(Embed, RejectsShapeMismatch) {
  const SpaceSpec s(2, 3);
  EXPECT_THROW(embed(CMat::Identity(3, 3), CMat::Identity(3, 3), s), ShapeError);
  EXPECT_THROW(embed(CMat::Identity(2, 2), CMat::Identity(4, 4), s), ShapeError);
}

TEST(ThermalState, ZeroTemperatureIsGround) {
  const SpaceSpec s(2, 6);
  const auto rho = thermal_state(0.0, s, 1);
  CMat expected = CMat::Zero(12, 12);
  expected(6, 6) = 1.0;
  EXPECT_EQ(rho.matrix(), expected);
}

TEST(ThermalState, GroundPopulationAfterTruncation) {
  const auto rho = thermal_state(1.0, SpaceSpec(2, 10));
  // Geometric weights 2^-(n+1) renormalised over n < 10.
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 0.5 / (1.0 - std::pow(2.0, -10)), 1e-15);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 0.500489, 1e-6);
}

TEST(ThermalState, TruncatedMeanPhononNumber) {
  const SpaceSpec s(2, 10);
  const auto rho = thermal_state(1.0, s);
  double direct = 0.0, norm = 0.0;
  for (int n = 0; n < 10; ++n) {
    direct += n * std::pow(0.5, n);
    norm += std::pow(0.5, n);
  }
  direct /= norm;
  const double mean = (phonon_number(s) * rho.matrix()).trace().real();
  EXPECT_NEAR(mean, direct, 1e-14);
  EXPECT_NEAR(mean, 0.99022, 5e-6);
  EXPECT_NEAR(truncated_thermal_mean(1.0, 10), direct, 1e-14);
}

TEST(ThermalState, TraceDiagonalAndMonotone) {
  for (double nbar : {0.3, 1.0, 3.0, 12.0}) {
    const SpaceSpec s(3, 30);
    const auto rho = thermal_state(nbar, s, 2);
    const CMat& m = rho.matrix();
    EXPECT_NEAR(m.trace().real(), 1.0, 1e-14);
    EXPECT_EQ(max_abs(CMat(m - CMat(m.diagonal().asDiagonal()))), 0.0);
    const int off = 2 * 30;
    for (int n = 1; n < 30; ++n) {
      EXPECT_GE(m(off + n, off + n).real(), 0.0);
      EXPECT_LE(m(off + n, off + n).real(), m(off + n - 1, off + n - 1).real());
    }
  }
}

TEST(ThermalState, RejectsBadInput) {
  EXPECT_THROW(thermal_state(-0.1, SpaceSpec(2, 4)), InvalidArgument);
  EXPECT_THROW(thermal_state(1.0, SpaceSpec(2, 4), 2), InvalidArgument);
}

TEST(DensityMatrix, Validation) {
  const SpaceSpec s(2, 2);
  std::mt19937 rng(23);
  const CMat good = testing::random_density(4, rng);
  EXPECT_NO_THROW(DensityMatrix(s, good));
  CMat skew = good;
  skew(0, 1) += 1e-6;
  EXPECT_THROW(DensityMatrix(s, skew), NotHermitianError);
  EXPECT_THROW(DensityMatrix(s, 2.0 * good), InvalidArgument);
  CMat negative = CMat::Zero(4, 4);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix(s, negative), InvalidArgument);
  EXPECT_THROW(DensityMatrix(s, CMat::Identity(3, 3) / 3.0), ShapeError);
}

}  // namespace
}  // namespace coolopt::fock
