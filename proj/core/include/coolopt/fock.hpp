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

// Truncated phonon Fock space, internal-level operators and initial states.
//
// Tensor ordering is internal (x) motional everywhere: the basis index of
// |level, n> is level * fock_dim + n.

#include "coolopt/linalg.hpp"

namespace coolopt::fock {

using linalg::CMat;

class SpaceSpec {
 public:
  /// internal_dim in {2, 3, 4}; fock_dim in [2, 64].
  SpaceSpec(int internal_dim, int fock_dim);

  int internal_dim() const noexcept { return internal_dim_; }
  int fock_dim() const noexcept { return fock_dim_; }
  int dim() const noexcept { return internal_dim_ * fock_dim_; }

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;

 private:
  int internal_dim_;
  int fock_dim_;
};

/// Hermitian, unit-trace, positive semidefinite operator on a SpaceSpec.
/// Construction validates: Hermitian within 1e-10, |tr - 1| <= 1e-10,
/// smallest eigenvalue >= -1e-8.
class DensityMatrix {
 public:
  DensityMatrix(SpaceSpec space, CMat matrix);

  const SpaceSpec& space() const noexcept { return space_; }
  const CMat& matrix() const noexcept { return matrix_; }

 private:
  SpaceSpec space_;
  CMat matrix_;
};

/// a with a[n-1, n] = sqrt(n).
CMat annihilator(int fock_dim);

/// a^dagger a = diag(0, 1, ..., d-1).
CMat number_op(int fock_dim);

/// Dimensionless X = a^dagger + a; callers scale by the Lamb-Dicke factor.
CMat position_op(int fock_dim);

/// |bra><ket| on the internal levels.
CMat level_op(int internal_dim, int bra, int ket);

/// kron(internal, motional) after checking both factors against `space`.
CMat embed(const CMat& internal, const CMat& motional, const SpaceSpec& space);

/// I_internal (x) a^dagger a on the full space.
CMat phonon_number(const SpaceSpec& space);

/// |level><level| (x) thermal state with p_n proportional to
/// (nbar0 / (1 + nbar0))^n, n < d, renormalised after truncation.
DensityMatrix thermal_state(double nbar0, const SpaceSpec& space,
                            int internal_level = 0);

/// Mean phonon number of the truncated thermal distribution; slightly below
/// nbar0 because of the truncation.
double truncated_thermal_mean(double nbar0, int fock_dim);

}  // namespace coolopt::fock
