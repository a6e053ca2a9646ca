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

#include "coolopt/hermitian_basis.hpp"

#include <cmath>
#include <numbers>

#include "coolopt/error.hpp"

namespace coolopt::liouville {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

HermitianBasis::HermitianBasis(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidArgument("HermitianBasis: dim must be positive");
}

RVec HermitianBasis::coordinates(const linalg::CMat& h) const {
  if (h.rows() != dim_ || h.cols() != dim_) {
    throw ShapeError("HermitianBasis::coordinates: shape mismatch");
  }
  const Eigen::Index n = dim_;
  RVec x(n * n);
  for (Eigen::Index q = 0; q < n; ++q) {
    x(q + n * q) = h(q, q).real();
    for (Eigen::Index p = 0; p < q; ++p) {
      // Average the two triangles so a slightly non-Hermitian input maps to
      // its Hermitian part.
      const linalg::cplx z = 0.5 * (h(p, q) + std::conj(h(q, p)));
      x(p + n * q) = kSqrt2 * z.real();
      x(q + n * p) = kSqrt2 * z.imag();
    }
  }
  return x;
}

linalg::CMat HermitianBasis::to_operator(const RVec& x) const {
  const Eigen::Index n = dim_;
  if (x.size() != n * n) throw ShapeError("HermitianBasis::to_operator: size mismatch");
  linalg::CMat h(n, n);
  for (Eigen::Index q = 0; q < n; ++q) {
    h(q, q) = x(q + n * q);
    for (Eigen::Index p = 0; p < q; ++p) {
      const linalg::cplx z(x(p + n * q) * kInvSqrt2, x(q + n * p) * kInvSqrt2);
      h(p, q) = z;
      h(q, p) = std::conj(z);
    }
  }
  return h;
}

linalg::CMat HermitianBasis::rotate(const linalg::CMat& superop) const {
  const Eigen::Index n = dim_;
  if (superop.rows() != n * n || superop.cols() != n * n) {
    throw ShapeError("HermitianBasis: superoperator shape mismatch");
  }
  const linalg::cplx i(0.0, 1.0);
  linalg::CMat m = superop;
  // Columns: M = L U.
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < q; ++p) {
      const Eigen::Index a = p + n * q;
      const Eigen::Index b = q + n * p;
      linalg::CVec ca = m.col(a);
      linalg::CVec cb = m.col(b);
      m.col(a) = kInvSqrt2 * (ca + cb);
      m.col(b) = (i * kInvSqrt2) * (ca - cb);
    }
  }
  // Rows: U^H M.
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < q; ++p) {
      const Eigen::Index a = p + n * q;
      const Eigen::Index b = q + n * p;
      Eigen::Matrix<linalg::cplx, 1, Eigen::Dynamic> ra = m.row(a);
      Eigen::Matrix<linalg::cplx, 1, Eigen::Dynamic> rb = m.row(b);
      m.row(a) = kInvSqrt2 * (ra + rb);
      m.row(b) = (-i * kInvSqrt2) * (ra - rb);
    }
  }
  return m;
}

RMat HermitianBasis::superoperator(const linalg::CMat& superop) const {
  return rotate(superop).real();
}

double HermitianBasis::imaginary_residue(const linalg::CMat& superop) const {
  return rotate(superop).imag().cwiseAbs().maxCoeff();
}

RVec HermitianBasis::trace_functional() const {
  return coordinates(linalg::CMat::Identity(dim_, dim_));
}

}  // namespace coolopt::liouville
