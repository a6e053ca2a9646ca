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

#pragma once

// Dense linear-algebra kernels: Kronecker products, Hermitian
// eigendecomposition, the matrix exponential and its Frechet derivative.
//
// Matrices are plain Eigen column-major dense matrices. The exponential
// routines are templated on the scalar and instantiated for double and
// std::complex<double>; the real instantiation is what the propagators use
// after mapping superoperators to a Hermitian operator basis.

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "coolopt/error.hpp"

namespace coolopt::linalg {

using cplx = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMat = Mat<cplx>;
using RMat = Mat<double>;
using CVec = Vec<cplx>;
using RVec = Vec<double>;

/// Throws InvalidArgument if any entry is NaN or infinite.
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, std::string_view what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + ": non-finite entry");
  }
}

/// max_ij |a_ij - conj(a_ji)|; infinite for non-square input.
double hermitian_defect(const CMat& a);

/// result[(i*p + k), (j*q + l)] = a[i, j] * b[k, l] for b of shape p x q.
template <typename Scalar>
Mat<Scalar> kron(const Mat<Scalar>& a, const Mat<Scalar>& b);

struct EigenDecomposition {
  RVec values;   // ascending
  CMat vectors;  // unitary, columns are eigenvectors
};

/// Hermitian eigendecomposition a = U diag(values) U^H.
/// Rejects input whose hermitian_defect exceeds `tolerance`.
EigenDecomposition eigh(const CMat& a, double tolerance = 1e-12);

/// Matrix exponential by scaling and squaring with a diagonal Pade
/// approximant of degree 3..13, degree and squaring count chosen from the
/// 1-norm.
template <typename Scalar>
Mat<Scalar> expm(const Mat<Scalar>& a);

template <typename Scalar>
struct ExpmFrechet {
  Mat<Scalar> expm;     // exp(a)
  Mat<Scalar> frechet;  // L(a, e) = d/dh exp(a + h e) at h = 0
};

/// exp(a) together with the Frechet derivative in direction e. This is the
/// exponential of the block matrix [[a, e], [0, a]] (diagonal block and
/// upper-right block), evaluated block-structurally so that the 2n x 2n
/// matrix is never formed.
template <typename Scalar>
ExpmFrechet<Scalar> expm_frechet(const Mat<Scalar>& a, const Mat<Scalar>& e);

/// Same as expm_frechet(a, u v^T). The direction is carried as a factored
/// low-rank matrix through the Pade stage and the early squarings, where
/// its rank stays small against n, which replaces most of the dense
/// products by matrix-vector-block ones. Results agree with the dense
/// route to rounding.
template <typename Scalar>
ExpmFrechet<Scalar> expm_frechet_rank1(const Mat<Scalar>& a, const Vec<Scalar>& u,
                                       const Vec<Scalar>& v);

/// Number of squarings expm would apply to `a`; exposed for diagnostics and
/// benchmarks.
template <typename Scalar>
int expm_squarings(const Mat<Scalar>& a);

}  // namespace coolopt::linalg
