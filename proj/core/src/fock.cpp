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

#include "coolopt/fock.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "coolopt/error.hpp"

namespace coolopt::fock {
namespace {

std::vector<double> thermal_populations(double nbar0, int fock_dim) {
  if (!(nbar0 >= 0.0) || !std::isfinite(nbar0)) {
    throw InvalidArgument("thermal_state: nbar0 must be finite and >= 0");
  }
  std::vector<double> p(fock_dim, 0.0);
  if (nbar0 == 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double ratio = nbar0 / (1.0 + nbar0);
  double total = 0.0;
  double term = 1.0;
  for (int n = 0; n < fock_dim; ++n) {
    p[n] = term;
    total += term;
    term *= ratio;
  }
  for (double& x : p) x /= total;
  return p;
}

}  // namespace

SpaceSpec::SpaceSpec(int internal_dim, int fock_dim)
    : internal_dim_(internal_dim), fock_dim_(fock_dim) {
  if (internal_dim < 2 || internal_dim > 4) {
    throw InvalidArgument("SpaceSpec: internal_dim must be 2, 3 or 4, got " +
                          std::to_string(internal_dim));
  }
  if (fock_dim < 2 || fock_dim > 64) {
    throw InvalidArgument("SpaceSpec: fock_dim must lie in [2, 64], got " +
                          std::to_string(fock_dim));
  }
}

DensityMatrix::DensityMatrix(SpaceSpec space, CMat matrix)
    : space_(space), matrix_(std::move(matrix)) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    throw ShapeError("DensityMatrix: matrix does not match the space");
  }
  linalg::require_finite(matrix_, "DensityMatrix");
  const double defect = linalg::hermitian_defect(matrix_);
  if (defect > 1e-10) {
    throw NotHermitianError("DensityMatrix: not Hermitian", defect);
  }
  const double trace = matrix_.trace().real();
  if (std::abs(trace - 1.0) > 1e-10) {
    throw InvalidArgument("DensityMatrix: trace " + std::to_string(trace) +
                          " differs from 1");
  }
  const CMat herm = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-8) {
    throw InvalidArgument("DensityMatrix: negative eigenvalue " +
                          std::to_string(solver.eigenvalues().minCoeff()));
  }
}

CMat annihilator(int fock_dim) {
  if (fock_dim < 2) throw InvalidArgument("annihilator: d must be >= 2");
  CMat a = CMat::Zero(fock_dim, fock_dim);
  for (int n = 1; n < fock_dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

CMat number_op(int fock_dim) {
  if (fock_dim < 2) throw InvalidArgument("number_op: d must be >= 2");
  CMat n = CMat::Zero(fock_dim, fock_dim);
  for (int k = 0; k < fock_dim; ++k) n(k, k) = double(k);
  return n;
}

CMat position_op(int fock_dim) {
  const CMat a = annihilator(fock_dim);
  return a + a.adjoint();
}

CMat level_op(int internal_dim, int bra, int ket) {
  if (internal_dim < 1 || bra < 0 || ket < 0 || bra >= internal_dim ||
      ket >= internal_dim) {
    throw InvalidArgument("level_op: index out of range");
  }
  CMat m = CMat::Zero(internal_dim, internal_dim);
  m(bra, ket) = 1.0;
  return m;
}

CMat embed(const CMat& internal, const CMat& motional, const SpaceSpec& space) {
  if (internal.rows() != space.internal_dim() ||
      internal.cols() != space.internal_dim()) {
    throw ShapeError("embed: internal factor does not match the space");
  }
  if (motional.rows() != space.fock_dim() ||
      motional.cols() != space.fock_dim()) {
    throw ShapeError("embed: motional factor does not match the space");
  }
  return linalg::kron(internal, motional);
}

CMat phonon_number(const SpaceSpec& space) {
  return embed(CMat::Identity(space.internal_dim(), space.internal_dim()),
               number_op(space.fock_dim()), space);
}

DensityMatrix thermal_state(double nbar0, const SpaceSpec& space,
                            int internal_level) {
  const auto p = thermal_populations(nbar0, space.fock_dim());
  CMat motional = CMat::Zero(space.fock_dim(), space.fock_dim());
  for (int n = 0; n < space.fock_dim(); ++n) motional(n, n) = p[n];
  CMat internal = level_op(space.internal_dim(), internal_level, internal_level);
  return DensityMatrix(space, embed(internal, motional, space));
}

double truncated_thermal_mean(double nbar0, int fock_dim) {
  const auto p = thermal_populations(nbar0, fock_dim);
  double mean = 0.0;
  for (int n = 0; n < fock_dim; ++n) mean += n * p[n];
  return mean;
}

}  // namespace coolopt::fock
