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

// Independent reference computations used only by the tests. None of these
// call into the code paths they are used to check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace coolopt::testing {

using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using cplx = std::complex<double>;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Sum of A^k / k! until the terms stop contributing. Intended for
/// ||A|| <= 1 only.
template <typename M>
M taylor_expm(const M& a) {
  M sum = M::Identity(a.rows(), a.cols());
  M term = sum;
  for (int k = 1; k < 60; ++k) {
    term = (term * a) / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-19 * sum.cwiseAbs().maxCoeff()) break;
  }
  return sum;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

inline double pattern_weight(bool parallel, double c) {
  return parallel ? 0.75 * (1.0 + c * c) : 1.5 * (1.0 - c * c);
}

/// int_{-1}^{1} w(c) cos(mu c) dc by n-node Gauss-Legendre.
inline double quadrature_kernel(double mu, bool parallel, int n = 64) {
  const auto [x, w] = gauss_legendre(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += w[i] * pattern_weight(parallel, x[i]) * std::cos(mu * x[i]);
  return s;
}

/// Column-stacked superoperator of rho -> a rho b by explicit index loops.
inline CMat loop_sandwich(const CMat& a, const CMat& b) {
  const auto n = a.rows();
  CMat s = CMat::Zero(n * n, n * n);
  // (a rho b)_{ij} = sum_{kl} a_ik rho_kl b_lj
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) s(i + n * j, k + n * l) += a(i, k) * b(l, j);
  return s;
}

/// Recoil dissipator as a sum of discrete jump operators
/// sqrt(gamma/2 * w_k * w(c_k)) |lower><upper| (x) exp(i eta X c_k).
inline CMat quadrature_dissipator(int internal_dim, int fock_dim, int lower, int upper,
                                  double gamma, double eta, bool parallel, int nodes) {
  const int d = fock_dim;
  const int n = internal_dim * d;
  CMat x = CMat::Zero(d, d);
  for (int k = 1; k < d; ++k) x(k - 1, k) = x(k, k - 1) = std::sqrt(double(k));
  CMat sigma = CMat::Zero(internal_dim, internal_dim);
  sigma(lower, upper) = 1.0;
  CMat pu = CMat::Zero(internal_dim, internal_dim);
  pu(upper, upper) = 1.0;
  const CMat id_m = CMat::Identity(d, d);
  const CMat id = CMat::Identity(n, n);
  const auto [c, w] = gauss_legendre(nodes);
  CMat out = CMat::Zero(n * n, n * n);
  for (int k = 0; k < nodes; ++k) {
    const CMat phase = (cplx(0.0, eta * c[k]) * x).exp();
    const CMat jump = Eigen::kroneckerProduct(sigma, phase).eval();
    out += 0.5 * gamma * w[k] * pattern_weight(parallel, c[k]) *
           loop_sandwich(jump, jump.adjoint());
  }
  const CMat big_pu = Eigen::kroneckerProduct(pu, id_m).eval();
  out -= 0.5 * gamma * (loop_sandwich(big_pu, id) + loop_sandwich(id, big_pu));
  return out;
}

inline CMat random_hermitian(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMat a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cplx(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

inline CMat random_complex(int n, int m, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMat a(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cplx(g(rng), g(rng));
  return a;
}

inline RMat random_real(int n, int m, std::mt19937& rng) {
  std::normal_distribution<double> g;
  RMat a(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = g(rng);
  return a;
}

/// Random density matrix: normalised A A^dagger.
inline CMat random_density(int n, std::mt19937& rng) {
  const CMat a = random_complex(n, n, rng);
  CMat rho = a * a.adjoint();
  return rho / rho.trace().real();
}

/// (1/2) sum |eig(a - b)| for Hermitian a, b.
inline double trace_distance(const CMat& a, const CMat& b) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a - b);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace coolopt::testing
