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

// Lindbladian superoperators on column-stacked density matrices.
//
// vec(A X B) = (B^T (x) A) vec(X), so rho -> A rho B is kron(B^T, A).

#include <string>

#include "coolopt/fock.hpp"
#include "coolopt/linalg.hpp"

namespace coolopt::liouville {

using fock::DensityMatrix;
using fock::SpaceSpec;
using linalg::CMat;
using linalg::CVec;

/// Dense generator acting on vec(rho); immutable after assembly.
class Superoperator {
 public:
  Superoperator(SpaceSpec space, CMat matrix);

  const SpaceSpec& space() const noexcept { return space_; }
  const CMat& matrix() const noexcept { return matrix_; }
  /// Side length of the matrix, dim(space)^2.
  Eigen::Index size() const noexcept { return matrix_.rows(); }

  Superoperator operator+(const Superoperator& other) const;
  Superoperator operator-(const Superoperator& other) const;
  Superoperator operator*(double factor) const;

  /// Applies the generator to rho and reshapes the result.
  CMat apply(const CMat& rho) const;

 private:
  SpaceSpec space_;
  CMat matrix_;
};

inline Superoperator operator*(double factor, const Superoperator& s) {
  return s * factor;
}

/// Column-stacking vectorisation and its inverse.
CVec vec(const CMat& m);
CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols);

/// rho -> a * rho * b as a superoperator matrix.
CMat sandwich(const CMat& a, const CMat& b);

/// -i[h, .] = -i (I (x) h - h^T (x) I). Requires h Hermitian within 1e-10.
Superoperator hamiltonian_part(const CMat& h, const SpaceSpec& space);

/// max_c |sum_i L[(i,i), c]|: how far vec(I)^H L is from zero.
double trace_defect(const CMat& superop);

enum class DipolePattern {
  parallel,       // weight (3/4)(1 + c^2)
  perpendicular,  // weight (3/2)(1 - c^2)
};

std::string to_string(DipolePattern pattern);
DipolePattern dipole_pattern_from_string(const std::string& name);

/// f(mu) = int_{-1}^{1} w(c) exp(i mu c) dc for the pattern weight w, in
/// closed form (a power series near mu = 0). Real and even; f(0) = 2.
double recoil_kernel(double mu, DipolePattern pattern);

/// Spontaneous decay upper -> lower with photon recoil averaged over the
/// emission pattern along the motional axis.
struct RecoilChannel {
  double rate = 0.0;        // gamma_j, units of nu
  int lower = 0;
  int upper = 1;
  double lamb_dicke = 0.0;  // eta_j
  DipolePattern pattern = DipolePattern::parallel;
};

/// (gamma/2) int w(c) |l><u| e^{i eta X c} rho e^{-i eta X c} |u><l| dc
///   - (gamma/2) {|u><u|, rho},
/// evaluated exactly in the eigenbasis of X = a^dagger + a.
Superoperator recoil_dissipator(const RecoilChannel& channel,
                                const SpaceSpec& space);

/// Unique stationary state of `l`. Throws DegenerateKernelError when the
/// kernel is not one-dimensional.
DensityMatrix steady_state(const Superoperator& l);

}  // namespace coolopt::liouville
