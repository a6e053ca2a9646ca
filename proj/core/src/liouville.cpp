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

#include "coolopt/liouville.hpp"

#include <cmath>

#include "coolopt/error.hpp"
#include "coolopt/hermitian_basis.hpp"

namespace coolopt::liouville {
namespace {

constexpr double kSeriesCutoff = 0.25;
constexpr int kSeriesTerms = 10;

// sin(mu)/mu = (1/2) int_{-1}^{1} cos(mu c) dc and
// (1/2) int_{-1}^{1} c^2 cos(mu c) dc, each as a power series in mu^2.
void moment_series(double mu, double& m0, double& m2) {
  const double mu2 = mu * mu;
  double term = 1.0;  // (-1)^k mu^{2k} / (2k)!
  m0 = 0.0;
  m2 = 0.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    m0 += term / (2 * k + 1);
    m2 += term / (2 * k + 3);
    term *= -mu2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
  }
}

void moment_closed(double mu, double& m0, double& m2) {
  const double s = std::sin(mu);
  const double c = std::cos(mu);
  m0 = s / mu;
  m2 = ((mu * mu - 2.0) * s + 2.0 * mu * c) / (mu * mu * mu);
}

void require_hermitian(const CMat& h, const char* what) {
  const double defect = linalg::hermitian_defect(h);
  if (!(defect <= 1e-10)) throw NotHermitianError(what, defect);
}

}  // namespace

Superoperator::Superoperator(SpaceSpec space, CMat matrix)
    : space_(space), matrix_(std::move(matrix)) {
  const Eigen::Index n = Eigen::Index(space_.dim()) * space_.dim();
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw ShapeError("Superoperator: matrix must be dim^2 x dim^2");
  }
}

Superoperator Superoperator::operator+(const Superoperator& other) const {
  if (!(space_ == other.space_)) throw ShapeError("Superoperator: space mismatch");
  return Superoperator(space_, matrix_ + other.matrix_);
}

Superoperator Superoperator::operator-(const Superoperator& other) const {
  if (!(space_ == other.space_)) throw ShapeError("Superoperator: space mismatch");
  return Superoperator(space_, matrix_ - other.matrix_);
}

Superoperator Superoperator::operator*(double factor) const {
  return Superoperator(space_, matrix_ * factor);
}

CMat Superoperator::apply(const CMat& rho) const {
  if (rho.rows() != space_.dim() || rho.cols() != space_.dim()) {
    throw ShapeError("Superoperator::apply: operand does not match the space");
  }
  return unvec(matrix_ * vec(rho), rho.rows(), rho.cols());
}

CVec vec(const CMat& m) {
  return Eigen::Map<const CVec>(m.data(), m.size());
}

CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != v.size()) throw ShapeError("unvec: size mismatch");
  return Eigen::Map<const CMat>(v.data(), rows, cols);
}

CMat sandwich(const CMat& a, const CMat& b) {
  return linalg::kron<linalg::cplx>(b.transpose(), a);
}

Superoperator hamiltonian_part(const CMat& h, const SpaceSpec& space) {
  if (h.rows() != space.dim() || h.cols() != space.dim()) {
    throw ShapeError("hamiltonian_part: Hamiltonian does not match the space");
  }
  require_hermitian(h, "hamiltonian_part: Hamiltonian is not Hermitian");
  const CMat id = CMat::Identity(space.dim(), space.dim());
  const linalg::cplx minus_i(0.0, -1.0);
  return Superoperator(space, minus_i * (linalg::kron<linalg::cplx>(id, h) -
                                         linalg::kron<linalg::cplx>(h.transpose(), id)));
}

double trace_defect(const CMat& superop) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(superop.rows()))));
  if (n * n != superop.rows()) throw ShapeError("trace_defect: not a superoperator");
  linalg::CVec row = linalg::CVec::Zero(superop.cols());
  for (Eigen::Index i = 0; i < n; ++i) row += superop.row(i + n * i).transpose();
  return row.cwiseAbs().maxCoeff();
}

std::string to_string(DipolePattern pattern) {
  return pattern == DipolePattern::parallel ? "parallel" : "perpendicular";
}

DipolePattern dipole_pattern_from_string(const std::string& name) {
  if (name == "parallel") return DipolePattern::parallel;
  if (name == "perpendicular") return DipolePattern::perpendicular;
  throw InvalidArgument("unknown dipole pattern '" + name + "'");
}

double recoil_kernel(double mu, DipolePattern pattern) {
  if (!std::isfinite(mu)) throw InvalidArgument("recoil_kernel: non-finite mu");
  double m0 = 0.0;
  double m2 = 0.0;
  if (std::abs(mu) < kSeriesCutoff) {
    moment_series(mu, m0, m2);
  } else {
    moment_closed(mu, m0, m2);
  }
  // (3/4)(1 + c^2) -> (3/2)(m0 + m2);  (3/2)(1 - c^2) -> 3 (m0 - m2)
  return pattern == DipolePattern::parallel ? 1.5 * (m0 + m2) : 3.0 * (m0 - m2);
}

Superoperator recoil_dissipator(const RecoilChannel& channel,
                                const SpaceSpec& space) {
  const int levels = space.internal_dim();
  if (!(channel.rate > 0.0) || !std::isfinite(channel.rate)) {
    throw InvalidArgument("recoil_dissipator: rate must be positive");
  }
  if (channel.lower == channel.upper || channel.lower < 0 ||
      channel.upper < 0 || channel.lower >= levels || channel.upper >= levels) {
    throw InvalidArgument("recoil_dissipator: invalid level pair");
  }
  if (!std::isfinite(channel.lamb_dicke)) {
    throw InvalidArgument("recoil_dissipator: non-finite Lamb-Dicke parameter");
  }

  const int d = space.fock_dim();
  const int dim = space.dim();
  const auto eig = linalg::eigh(fock::position_op(d));

  // Motional map sigma -> U (F o (U^H sigma U)) U^H on vec(sigma).
  CMat weights(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      weights(j, k) = recoil_kernel(
          channel.lamb_dicke * (eig.values(j) - eig.values(k)), channel.pattern);
    }
  }
  const CMat& u = eig.vectors;
  const CMat to_eigen = sandwich(u.adjoint(), u);
  const CMat from_eigen = sandwich(u, u.adjoint());
  const CMat motional = from_eigen * vec(weights).asDiagonal() * to_eigen;

  CMat out = CMat::Zero(Eigen::Index(dim) * dim, Eigen::Index(dim) * dim);
  const double half_rate = 0.5 * channel.rate;
  const int lo = channel.lower * d;
  const int up = channel.upper * d;
  for (int np = 0; np < d; ++np) {
    for (int n = 0; n < d; ++n) {
      const Eigen::Index col = (up + n) + Eigen::Index(dim) * (up + np);
      for (int mp = 0; mp < d; ++mp) {
        for (int m = 0; m < d; ++m) {
          const Eigen::Index row = (lo + m) + Eigen::Index(dim) * (lo + mp);
          out(row, col) += half_rate * motional(m + d * mp, n + d * np);
        }
      }
    }
  }
  // -(gamma/2)(P rho + rho P) with P = |u><u| (x) I is diagonal on vec(rho).
  for (int j = 0; j < dim; ++j) {
    const bool pj = (j / d) == channel.upper;
    for (int i = 0; i < dim; ++i) {
      const bool pi = (i / d) == channel.upper;
      const double weight = double(pi) + double(pj);
      if (weight != 0.0) out(i + Eigen::Index(dim) * j, i + Eigen::Index(dim) * j) -= half_rate * weight;
    }
  }
  return Superoperator(space, std::move(out));
}

DensityMatrix steady_state(const Superoperator& l) {
  const int dim = l.space().dim();
  const HermitianBasis basis(dim);
  const RMat real = basis.superoperator(l.matrix());
  // Rank-revealing QR: rcond estimates from LU are unreliable exactly when
  // the kernel is degenerate.
  Eigen::ColPivHouseholderQR<RMat> rank_qr(real);
  rank_qr.setThreshold(1e-10);
  const long kernel = static_cast<long>(real.cols() - rank_qr.rank());
  if (kernel != 1) {
    throw DegenerateKernelError(
        "steady_state: Lindbladian kernel is not one-dimensional (dimension " +
            std::to_string(kernel) + ")",
        kernel);
  }
  RMat bordered = real;
  const RVec trace = basis.trace_functional();
  // tr(L rho) = 0 makes the rows for diagonal entries linearly dependent;
  // swapping one of them for the trace condition pins the normalisation.
  bordered.row(0) = trace.transpose();
  RVec rhs = RVec::Zero(bordered.rows());
  rhs(0) = 1.0;
  Eigen::PartialPivLU<RMat> lu(bordered);
  const RVec x = lu.solve(rhs);
  CMat rho = basis.to_operator(x);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return DensityMatrix(l.space(), std::move(rho));
}

}  // namespace coolopt::liouville
