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

// Real coordinates for Hermitian operators.
//
// For a d x d Hermitian rho the d^2 real numbers
//   x[(i, i)] = rho_ii,
//   x[(p, q)] = sqrt(2) Re rho_pq,  x[(q, p)] = sqrt(2) Im rho_pq   (p < q),
// stored at the column-stacked position of the listed index pair, are the
// coordinates of rho in an orthonormal operator basis. Hermiticity-preserving
// superoperators are real matrices in these coordinates, so propagators run
// in real arithmetic. For Hermitian O and rho, tr(O rho) = x_O . x_rho.

#include "coolopt/linalg.hpp"

namespace coolopt::liouville {

using linalg::RMat;
using linalg::RVec;

class HermitianBasis {
 public:
  explicit HermitianBasis(int dim);

  int dim() const noexcept { return dim_; }

  /// Coordinates of a Hermitian matrix (the anti-Hermitian part is dropped).
  RVec coordinates(const linalg::CMat& hermitian) const;

  /// Inverse of coordinates().
  linalg::CMat to_operator(const RVec& x) const;

  /// U^H L U for the unitary U mapping coordinates to vec(rho). The
  /// imaginary residue (zero for Hermiticity-preserving L) is discarded;
  /// see imaginary_residue().
  RMat superoperator(const linalg::CMat& superop) const;

  /// max |Im(U^H L U)|.
  double imaginary_residue(const linalg::CMat& superop) const;

  /// Coordinates of the identity; x . trace_functional() = tr(rho).
  RVec trace_functional() const;

 private:
  linalg::CMat rotate(const linalg::CMat& superop) const;

  int dim_;
};

}  // namespace coolopt::liouville
