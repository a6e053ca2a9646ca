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

#include <random>

#include "coolopt/error.hpp"
#include "coolopt/linalg.hpp"
#include "oracles.hpp"

namespace coolopt::linalg {
namespace {

using testing::max_abs;

using testing::random_complex;
using testing::random_hermitian;
using testing::random_real;

TEST(Kron, IdentityTimesIdentity) {
  const CMat k = kron<cplx>(CMat::Identity(2, 2), CMat::Identity(3, 3));
  EXPECT_EQ(k, CMat::Identity(6, 6));
}

TEST(Kron, DiagonalTimesIdentity) {
  CMat a = CMat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const CMat k = kron<cplx>(a, CMat::Identity(2, 2));
  CMat expected = CMat::Zero(4, 4);
  expected.diagonal() << 1.0, 1.0, 2.0, 2.0;
  EXPECT_EQ(k, expected);
}

TEST(Kron, MatchesFourIndexFormula) {
  std::mt19937 rng(1);
  const CMat a = random_complex(2, 2, rng);
  const CMat b = random_complex(3, 3, rng);
  const CMat k = kron<cplx>(a, b);
  ASSERT_EQ(k.rows(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) EXPECT_LT(std::abs(k(i * 3 + p, j * 3 + q) - a(i, j) * b(p, q)), 1e-15);
}

TEST(Kron, RectangularShapes) {
  std::mt19937 rng(2);
  const RMat a = random_real(2, 3, rng);
  const RMat b = random_real(4, 1, rng);
  const RMat k = kron<double>(a, b);
  EXPECT_EQ(k.rows(), 8);
  EXPECT_EQ(k.cols(), 3);
  EXPECT_DOUBLE_EQ(k(5, 2), a(1, 2) * b(1, 0));
}

TEST(Eigh, DiagonalInputGivesPermutation) {
  CMat a = CMat::Zero(3, 3);
  a.diagonal() << 3.0, 1.0, 2.0;
  const auto e = eigh(a);
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 2.0, 1e-14);
  EXPECT_NEAR(e.values(2), 3.0, 1e-14);
  for (int j = 0; j < 3; ++j) {
    int ones = 0;
    for (int i = 0; i < 3; ++i) {
      const double v = std::abs(e.vectors(i, j));
      EXPECT_TRUE(v < 1e-14 || std::abs(v - 1.0) < 1e-14);
      ones += v > 0.5;
    }
    EXPECT_EQ(ones, 1);
  }
}

TEST(Eigh, PauliX) {
  CMat a(2, 2);
  a << 0.0, 1.0, 1.0, 0.0;
  const auto e = eigh(a);
  EXPECT_NEAR(e.values(0), -1.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
}

TEST(Eigh, RandomReconstructionAndUnitarity) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const CMat a = random_hermitian(8, rng);
    const auto e = eigh(a);
    const CMat rebuilt = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(max_abs(rebuilt - a), 1e-10);
    EXPECT_LT(max_abs(e.vectors.adjoint() * e.vectors - CMat::Identity(8, 8)), 1e-10);
    for (int k = 1; k < 8; ++k) EXPECT_LE(e.values(k - 1), e.values(k));
  }
}

TEST(Eigh, RejectsNonHermitianWithDefect) {
  CMat a = CMat::Zero(2, 2);
  a(0, 1) = 1.0;
  try {
    eigh(a);
    FAIL() << "expected NotHermitianError";
  } catch (const NotHermitianError& e) {
    EXPECT_NEAR(e.defect(), 1.0, 1e-15);
  }
}

TEST(Expm, ZeroMatrix) {
  EXPECT_EQ(expm<cplx>(CMat::Zero(4, 4)), CMat::Identity(4, 4));
  EXPECT_EQ(expm<double>(RMat::Zero(3, 3)), RMat::Identity(3, 3));
}

TEST(Expm, Diagonal) {
  RMat a = RMat::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = -2.0;
  const RMat e = expm(a);
  EXPECT_NEAR(e(0, 0), std::exp(1.0), 1e-15 * std::exp(1.0));
  EXPECT_NEAR(e(1, 1), std::exp(-2.0), 1e-15);
  EXPECT_EQ(e(0, 1), 0.0);
  EXPECT_EQ(e(1, 0), 0.0);
}

TEST(Expm, MatchesTaylorSeriesForSmallNorm) {
  std::mt19937 rng(4);
  for (double norm : {1e-3, 0.05, 0.3, 0.9}) {
    CMat a = random_complex(6, 6, rng);
    a *= norm / a.cwiseAbs().colwise().sum().maxCoeff();
    const CMat ref = testing::taylor_expm(a);
    EXPECT_LT(max_abs(expm(a) - ref) / max_abs(ref), 1e-12) << "norm " << norm;

    RMat r = random_real(6, 6, rng);
    r *= norm / r.cwiseAbs().colwise().sum().maxCoeff();
    const RMat rref = testing::taylor_expm(r);
    EXPECT_LT(max_abs(expm(r) - rref) / max_abs(rref), 1e-12) << "norm " << norm;
  }
}

TEST(Expm, LargeNormAgainstSpectralOracle) {
  // Hermitian input: exp(a) = U exp(L) U^H is well conditioned.
  std::mt19937 rng(5);
  for (double scale : {3.0, 20.0, 150.0}) {
    CMat h = random_hermitian(7, rng);
    h *= scale / h.cwiseAbs().colwise().sum().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const CMat ref = es.eigenvectors() *
                     es.eigenvalues().array().exp().matrix().cast<cplx>().asDiagonal() *
                     es.eigenvectors().adjoint();
    EXPECT_LT(max_abs(expm(h) - ref) / max_abs(ref), 1e-12) << "scale " << scale;
  }
}

TEST(Expm, InverseProperty) {
  std::mt19937 rng(6);
  for (double norm : {0.5, 4.0, 10.0}) {
    // Skew-Hermitian inputs keep exp(a) unitary, so the product is well
    // conditioned at every norm.
    CMat a = random_hermitian(6, rng) * cplx(0.0, 1.0);
    a *= norm / a.cwiseAbs().colwise().sum().maxCoeff();
    EXPECT_LT(max_abs(expm(a) * expm<cplx>(-a) - CMat::Identity(6, 6)), 1e-10);
  }
  RMat r = random_real(5, 5, rng);
  r *= 2.0 / r.cwiseAbs().colwise().sum().maxCoeff();
  EXPECT_LT(max_abs(expm(r) * expm<double>(-r) - RMat::Identity(5, 5)), 1e-10);
}

TEST(Expm, DirectSumIsBlockDiagonal) {
  std::mt19937 rng(7);
  const CMat a = random_complex(3, 3, rng);
  const CMat b = random_complex(4, 4, rng) * 2.0;
  CMat s = CMat::Zero(7, 7);
  s.topLeftCorner(3, 3) = a;
  s.bottomRightCorner(4, 4) = b;
  const CMat e = expm(s);
  EXPECT_LT(max_abs(e.topLeftCorner(3, 3) - expm(a)), 1e-12 * max_abs(expm(a)));
  EXPECT_LT(max_abs(e.bottomRightCorner(4, 4) - expm(b)), 1e-12 * max_abs(expm(b)));
  EXPECT_EQ(max_abs(e.topRightCorner(3, 4)), 0.0);
}

TEST(Expm, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(expm<double>(RMat::Zero(2, 3)), ShapeError);
  RMat a = RMat::Zero(2, 2);
  a(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(expm(a), InvalidArgument);
}

TEST(ExpmFrechet, ZeroDirection) {
  std::mt19937 rng(8);
  const CMat a = random_complex(4, 4, rng);
  const auto r = expm_frechet<cplx>(a, CMat::Zero(4, 4));
  EXPECT_EQ(max_abs(r.frechet), 0.0);
}

TEST(ExpmFrechet, CommutingDiagonalCase) {
  RMat a = RMat::Zero(3, 3);
  a.diagonal() << 0.3, -1.2, 2.5;
  RMat e = RMat::Zero(3, 3);
  e.diagonal() << 1.0, -0.5, 0.25;
  const auto r = expm_frechet(a, e);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(r.frechet(i, i), e(i, i) * std::exp(a(i, i)), 1e-13 * std::exp(2.5));
  }
  EXPECT_LT(max_abs(RMat(r.frechet - RMat(r.frechet.diagonal().asDiagonal()))), 1e-15);
}

TEST(ExpmFrechet, MatchesCentralDifference) {
  std::mt19937 rng(9);
  const double h = 1e-6;
  for (double norm : {0.1, 1.0, 6.0}) {
    CMat a = random_complex(5, 5, rng);
    a *= norm / a.cwiseAbs().colwise().sum().maxCoeff();
    const CMat e = random_complex(5, 5, rng);
    const auto r = expm_frechet(a, e);
    const CMat fd = (expm<cplx>(a + h * e) - expm<cplx>(a - h * e)) / (2.0 * h);
    EXPECT_LT(max_abs(r.frechet - fd) / max_abs(fd), 1e-6) << "norm " << norm;
  }
}

TEST(ExpmFrechet, MatchesLiteralBlockExponential) {
  // exp([[A, E], [0, A]]) has the Frechet derivative as its upper-right
  // block; exponentiate the doubled matrix by the Taylor or spectral-free
  // route of the matrix-function module.
  std::mt19937 rng(10);
  for (double norm : {0.01, 0.5, 3.0, 40.0}) {
    RMat a = random_real(6, 6, rng);
    a *= norm / a.cwiseAbs().colwise().sum().maxCoeff();
    // Keep the spectrum in the left half plane so large norms stay bounded.
    a -= RMat::Identity(6, 6) * (norm * 0.5);
    const RMat e = random_real(6, 6, rng);
    RMat block = RMat::Zero(12, 12);
    block.topLeftCorner(6, 6) = a;
    block.topRightCorner(6, 6) = e;
    block.bottomRightCorner(6, 6) = a;
    const RMat big = block.exp();
    const auto r = expm_frechet(a, e);
    const double scale = max_abs(RMat(big.topRightCorner(6, 6)));
    EXPECT_LT(max_abs(RMat(r.frechet - big.topRightCorner(6, 6))) / scale, 1e-11)
        << "norm " << norm;
    EXPECT_LT(max_abs(RMat(r.expm - big.topLeftCorner(6, 6))) / max_abs(r.expm), 1e-11);
  }
}

TEST(ExpmFrechet, LinearInDirection) {
  std::mt19937 rng(11);
  const CMat a = random_complex(5, 5, rng);
  const CMat e1 = random_complex(5, 5, rng);
  const CMat e2 = random_complex(5, 5, rng);
  const CMat sum = expm_frechet<cplx>(a, e1 + e2).frechet;
  const CMat parts = expm_frechet(a, e1).frechet + expm_frechet(a, e2).frechet;
  EXPECT_LT(max_abs(sum - parts) / max_abs(sum), 1e-10);
}

TEST(ExpmFrechet, ExpmPartAgreesWithExpm) {
  std::mt19937 rng(12);
  for (double norm : {0.2, 2.0, 25.0}) {
    RMat a = random_real(7, 7, rng);
    a *= norm / a.cwiseAbs().colwise().sum().maxCoeff();
    const auto r = expm_frechet<double>(a, random_real(7, 7, rng));
    EXPECT_LT(max_abs(RMat(r.expm - expm(a))) / max_abs(r.expm), 1e-12);
  }
}

TEST(ExpmFrechet, RejectsShapeMismatch) {
  EXPECT_THROW(expm_frechet<double>(RMat::Zero(3, 3), RMat::Zero(2, 2)), ShapeError);
}

TEST(ExpmFrechetRank1, MatchesDenseDirection) {
  // n = 400 keeps the factored squarings in play for a few steps before
  // the switch to dense products.
  std::mt19937 rng(13);
  for (double norm : {0.5, 40.0, 900.0}) {
    const int n = 400;
    RMat a = random_real(n, n, rng);
    a *= norm / a.cwiseAbs().colwise().sum().maxCoeff();
    a -= RMat::Identity(n, n) * (norm * 0.02);
    const RVec u = random_real(n, 1, rng);
    const RVec v = random_real(n, 1, rng);
    const auto dense = expm_frechet<double>(a, u * v.transpose());
    const auto factored = expm_frechet_rank1<double>(a, u, v);
    EXPECT_LT(max_abs(RMat(factored.frechet - dense.frechet)) / max_abs(dense.frechet), 1e-11)
        << "norm " << norm;
    EXPECT_LT(max_abs(RMat(factored.expm - dense.expm)) / max_abs(dense.expm), 1e-12)
        << "norm " << norm;
  }
}

TEST(ExpmFrechetRank1, ComplexAndSmallSizes) {
  std::mt19937 rng(14);
  for (int n : {1, 3, 9, 150}) {
    CMat a = random_complex(n, n, rng);
    a *= 30.0 / a.cwiseAbs().colwise().sum().maxCoeff();
    const CVec u = random_complex(n, 1, rng);
    const CVec v = random_complex(n, 1, rng);
    const auto dense = expm_frechet<cplx>(a, u * v.transpose());
    const auto factored = expm_frechet_rank1<cplx>(a, u, v);
    EXPECT_LT(max_abs(CMat(factored.frechet - dense.frechet)) / max_abs(dense.frechet), 1e-11)
        << "n " << n;
  }
}

TEST(ExpmFrechetRank1, RejectsShapeMismatch) {
  EXPECT_THROW(expm_frechet_rank1<double>(RMat::Zero(3, 3), RVec::Zero(2), RVec::Zero(3)),
               ShapeError);
}

}  // namespace
}  // namespace coolopt::linalg
