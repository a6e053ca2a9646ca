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

#include "coolopt/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <utility>
#include <span>

#include "coolopt/error.hpp"

namespace coolopt::linalg {
namespace {

// Diagonal Pade coefficients b_0..b_m for exp.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// 1-norm bounds below which the degree-m approximant meets unit roundoff
// for exp (theta_m) and for the Frechet derivative (ell_m).
constexpr std::array<int, 4> kLowDegrees = {3, 5, 7, 9};
constexpr std::array<double, 4> kThetaLow = {1.495585217958292e-2,
                                             2.539398330063230e-1,
                                             9.504178996162932e-1,
                                             2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;
constexpr std::array<double, 4> kEllLow = {1.08e-2, 2.00e-1, 7.83e-1, 1.78e0};
constexpr double kEll13 = 4.74e0;

std::span<const double> pade_coefficients(int m) {
  switch (m) {
    case 3: return kPade3;
    case 5: return kPade5;
    case 7: return kPade7;
    case 9: return kPade9;
    default: return kPade13;
  }
}

template <typename Scalar>
double norm1(const Mat<Scalar>& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Scalar>
void require_square(const Mat<Scalar>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ShapeError(std::string(what) + ": expected a non-empty square matrix");
  }
}

// Even powers A^2, A^4, ... up to what degree m needs. powers[k] = A^(2k).
template <typename Scalar>
std::vector<Mat<Scalar>> even_powers(const Mat<Scalar>& a, int m) {
  const int count = (m == 13) ? 3 : (m - 1) / 2;
  std::vector<Mat<Scalar>> powers;
  powers.reserve(count + 1);
  powers.push_back(Mat<Scalar>::Identity(a.rows(), a.cols()));
  if (count >= 1) {
    Mat<Scalar> a2(a.rows(), a.cols());
    a2.noalias() = a * a;
    powers.push_back(std::move(a2));
  }
  for (int k = 2; k <= count; ++k) {
    Mat<Scalar> next(a.rows(), a.cols());
    if (k == 3) {
      next.noalias() = powers[2] * powers[1];
    } else {
      next.noalias() = powers[k - 1] * powers[1];
    }
    powers.push_back(std::move(next));
  }
  return powers;
}

// Derivatives M_{2k} of the even powers along E (M_0 = 0 is not stored;
// derivs[k-1] = M_{2k}).
template <typename Scalar>
std::vector<Mat<Scalar>> even_power_derivatives(
    const Mat<Scalar>& a, const Mat<Scalar>& e,
    const std::vector<Mat<Scalar>>& powers) {
  const int count = static_cast<int>(powers.size()) - 1;
  std::vector<Mat<Scalar>> derivs;
  derivs.reserve(count);
  if (count >= 1) {
    Mat<Scalar> m2(a.rows(), a.cols());
    m2.noalias() = a * e;
    m2.noalias() += e * a;
    derivs.push_back(std::move(m2));
  }
  for (int k = 2; k <= count; ++k) {
    Mat<Scalar> next(a.rows(), a.cols());
    if (k == 2) {  // A4 = A2 A2
      next.noalias() = powers[1] * derivs[0];
      next.noalias() += derivs[0] * powers[1];
    } else if (k == 3) {  // A6 = A4 A2
      next.noalias() = powers[2] * derivs[0];
      next.noalias() += derivs[1] * powers[1];
    } else {  // A8 = A4 A4
      next.noalias() = powers[2] * derivs[1];
      next.noalias() += derivs[1] * powers[2];
    }
    derivs.push_back(std::move(next));
  }
  return derivs;
}

template <typename Scalar>
struct PadeParts {
  Mat<Scalar> u;
  Mat<Scalar> v;
  Mat<Scalar> lu;  // only when a direction was supplied
  Mat<Scalar> lv;
};

// Odd part U = A * sum b_{2k+1} A^{2k}, even part V = sum b_{2k} A^{2k}, and
// (optionally) their derivatives along E.
template <typename Scalar>
PadeParts<Scalar> pade_parts(const Mat<Scalar>& a, const Mat<Scalar>* e,
                             int m) {
  const auto b = pade_coefficients(m);
  const auto n = a.rows();
  auto powers = even_powers(a, m);
  std::vector<Mat<Scalar>> derivs;
  if (e != nullptr) derivs = even_power_derivatives(a, *e, powers);

  PadeParts<Scalar> out;
  if (m != 13) {
    const int count = (m - 1) / 2;
    Mat<Scalar> odd = Mat<Scalar>::Zero(n, n);
    out.v = Mat<Scalar>::Zero(n, n);
    for (int k = 0; k <= count; ++k) {
      odd += b[2 * k + 1] * powers[k];
      out.v += b[2 * k] * powers[k];
    }
    out.u.resize(n, n);
    out.u.noalias() = a * odd;
    if (e != nullptr) {
      Mat<Scalar> dodd = Mat<Scalar>::Zero(n, n);
      out.lv = Mat<Scalar>::Zero(n, n);
      for (int k = 1; k <= count; ++k) {
        dodd += b[2 * k + 1] * derivs[k - 1];
        out.lv += b[2 * k] * derivs[k - 1];
      }
      out.lu.resize(n, n);
      out.lu.noalias() = a * dodd;
      out.lu.noalias() += (*e) * odd;
    }
    return out;
  }

  const auto& a2 = powers[1];
  const auto& a4 = powers[2];
  const auto& a6 = powers[3];
  const auto id = Mat<Scalar>::Identity(n, n);

  Mat<Scalar> w1 = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Mat<Scalar> w(n, n);
  w.noalias() = a6 * w1;
  w += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  Mat<Scalar> z1 = b[12] * a6 + b[10] * a4 + b[8] * a2;
  out.v.resize(n, n);
  out.v.noalias() = a6 * z1;
  out.v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  out.u.resize(n, n);
  out.u.noalias() = a * w;

  if (e != nullptr) {
    const auto& m2 = derivs[0];
    const auto& m4 = derivs[1];
    const auto& m6 = derivs[2];
    Mat<Scalar> lw(n, n);
    {
      Mat<Scalar> lw1 = b[13] * m6 + b[11] * m4 + b[9] * m2;
      lw.noalias() = a6 * lw1;
    }
    lw.noalias() += m6 * w1;
    lw += b[7] * m6 + b[5] * m4 + b[3] * m2;
    out.lu.resize(n, n);
    out.lu.noalias() = a * lw;
    out.lu.noalias() += (*e) * w;

    Mat<Scalar> lz1 = b[12] * m6 + b[10] * m4 + b[8] * m2;
    out.lv.resize(n, n);
    out.lv.noalias() = a6 * lz1;
    out.lv.noalias() += m6 * z1;
    out.lv += b[6] * m6 + b[4] * m4 + b[2] * m2;
  }
  return out;
}

// Factored matrix u v^T with n x r factors; the plain transpose, so the
// same algebra holds for complex scalars.
template <typename Scalar>
struct LowRank {
  Mat<Scalar> u;
  Mat<Scalar> v;

  Eigen::Index rank() const { return u.cols(); }
};

template <typename Scalar>
LowRank<Scalar> times_left(const Mat<Scalar>& d, const LowRank<Scalar>& l) {
  LowRank<Scalar> out{Mat<Scalar>(d.rows(), l.rank()), l.v};
  out.u.noalias() = d * l.u;
  return out;
}

template <typename Scalar>
LowRank<Scalar> times_right(const LowRank<Scalar>& l, const Mat<Scalar>& d) {
  LowRank<Scalar> out{l.u, Mat<Scalar>(d.cols(), l.rank())};
  out.v.noalias() = d.transpose() * l.v;
  return out;
}

// Rank-revealing recompression: thin QR of both factors, SVD of the small
// core, singular values below rounding of the largest one dropped.
template <typename Scalar>
LowRank<Scalar> compress(const LowRank<Scalar>& l) {
  const auto n = l.u.rows();
  const auto k = l.rank();
  if (k == 0) return l;
  Eigen::HouseholderQR<Mat<Scalar>> qu(l.u);
  Eigen::HouseholderQR<Mat<Scalar>> qv(l.v);
  const auto r = std::min(n, k);
  const Mat<Scalar> ru = qu.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  const Mat<Scalar> rv = qv.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  const Mat<Scalar> core = ru * rv.transpose();
  Eigen::BDCSVD<Mat<Scalar>> svd(core, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double cut = sigma.size() > 0
                         ? sigma[0] * std::numeric_limits<double>::epsilon()
                         : 0.0;
  Eigen::Index keep = 0;
  while (keep < sigma.size() && sigma[keep] > cut) ++keep;
  const Mat<Scalar> q_u = qu.householderQ() * Mat<Scalar>::Identity(n, r);
  const Mat<Scalar> q_v = qv.householderQ() * Mat<Scalar>::Identity(n, r);
  LowRank<Scalar> out;
  out.u = q_u * (svd.matrixU().leftCols(keep) * sigma.head(keep).asDiagonal());
  out.v = q_v * svd.matrixV().leftCols(keep).conjugate();
  return out;
}

// sum_i c_i l_i, recompressed.
template <typename Scalar>
LowRank<Scalar> combine(std::initializer_list<std::pair<double, const LowRank<Scalar>*>> terms) {
  Eigen::Index rank = 0;
  Eigen::Index n = 0;
  for (const auto& t : terms) {
    rank += t.second->rank();
    n = t.second->u.rows();
  }
  LowRank<Scalar> out{Mat<Scalar>(n, rank), Mat<Scalar>(n, rank)};
  Eigen::Index col = 0;
  for (const auto& [c, l] : terms) {
    out.u.middleCols(col, l->rank()) = c * l->u;
    out.v.middleCols(col, l->rank()) = l->v;
    col += l->rank();
  }
  return compress(out);
}

template <typename Scalar>
Mat<Scalar> dense(const LowRank<Scalar>& l) {
  Mat<Scalar> out(l.u.rows(), l.v.rows());
  out.noalias() = l.u * l.v.transpose();
  return out;
}

template <typename Scalar>
int squarings_for(double norm, double threshold) {
  if (norm <= threshold) return 0;
  return std::max(0, static_cast<int>(std::ceil(std::log2(norm / threshold))));
}

}  // namespace

double hermitian_defect(const CMat& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
Mat<Scalar> kron(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  const auto p = b.rows();
  const auto q = b.cols();
  Mat<Scalar> out(a.rows() * p, a.cols() * q);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      out.block(i * p, j * q, p, q) = a(i, j) * b;
    }
  }
  return out;
}

EigenDecomposition eigh(const CMat& a, double tolerance) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ShapeError("eigh: expected a non-empty square matrix");
  }
  const double defect = hermitian_defect(a);
  if (!(defect <= tolerance)) {
    throw NotHermitianError("eigh: input is not Hermitian", defect);
  }
  Eigen::SelfAdjointEigenSolver<CMat> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigh: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Scalar>
int expm_squarings(const Mat<Scalar>& a) {
  const double norm = norm1(a);
  if (norm <= kThetaLow.back()) return 0;
  return squarings_for<Scalar>(norm, kTheta13);
}

template <typename Scalar>
Mat<Scalar> expm(const Mat<Scalar>& a) {
  require_square(a, "expm");
  const double norm = norm1(a);
  if (!std::isfinite(norm)) throw InvalidArgument("expm: non-finite input");

  for (std::size_t i = 0; i < kLowDegrees.size(); ++i) {
    if (norm <= kThetaLow[i]) {
      auto parts = pade_parts<Scalar>(a, nullptr, kLowDegrees[i]);
      Eigen::PartialPivLU<Mat<Scalar>> lu(parts.v - parts.u);
      return lu.solve(parts.u + parts.v);
    }
  }

  const int s = squarings_for<Scalar>(norm, kTheta13);
  const Mat<Scalar> scaled = a * std::ldexp(1.0, -s);
  auto parts = pade_parts<Scalar>(scaled, nullptr, 13);
  Mat<Scalar> r;
  {
    Eigen::PartialPivLU<Mat<Scalar>> lu(parts.v - parts.u);
    r = lu.solve(parts.u + parts.v);
  }
  Mat<Scalar> tmp(r.rows(), r.cols());
  for (int k = 0; k < s; ++k) {
    tmp.noalias() = r * r;
    r.swap(tmp);
  }
  return r;
}

template <typename Scalar>
ExpmFrechet<Scalar> expm_frechet(const Mat<Scalar>& a, const Mat<Scalar>& e) {
  require_square(a, "expm_frechet");
  if (e.rows() != a.rows() || e.cols() != a.cols()) {
    throw ShapeError("expm_frechet: direction must match the matrix shape");
  }
  const double norm = norm1(a);
  if (!std::isfinite(norm) || !e.allFinite()) {
    throw InvalidArgument("expm_frechet: non-finite input");
  }

  int degree = 13;
  int s = 0;
  for (std::size_t i = 0; i < kLowDegrees.size(); ++i) {
    if (norm <= kEllLow[i]) {
      degree = kLowDegrees[i];
      break;
    }
  }
  if (degree == 13) s = squarings_for<Scalar>(norm, kEll13);

  const double scale = std::ldexp(1.0, -s);
  const Mat<Scalar> as = a * scale;
  const Mat<Scalar> es = e * scale;
  auto parts = pade_parts<Scalar>(as, &es, degree);

  ExpmFrechet<Scalar> out;
  {
    Eigen::PartialPivLU<Mat<Scalar>> lu(parts.v - parts.u);
    out.expm = lu.solve(parts.u + parts.v);
    Mat<Scalar> rhs = parts.lu + parts.lv;
    rhs.noalias() += (parts.lu - parts.lv) * out.expm;
    out.frechet = lu.solve(rhs);
  }

  // [[R, L], [0, R]]^2 = [[R^2, RL + LR], [0, R^2]]
  Mat<Scalar> tmp(a.rows(), a.cols());
  for (int k = 0; k < s; ++k) {
    tmp.noalias() = out.expm * out.frechet;
    tmp.noalias() += out.frechet * out.expm;
    out.frechet.swap(tmp);
    tmp.noalias() = out.expm * out.expm;
    out.expm.swap(tmp);
  }
  return out;
}

template <typename Scalar>
ExpmFrechet<Scalar> expm_frechet_rank1(const Mat<Scalar>& a, const Vec<Scalar>& u,
                                       const Vec<Scalar>& v) {
  require_square(a, "expm_frechet_rank1");
  if (u.size() != a.rows() || v.size() != a.rows()) {
    throw ShapeError("expm_frechet_rank1: direction must match the matrix shape");
  }
  const double norm = norm1(a);
  if (!std::isfinite(norm) || !u.allFinite() || !v.allFinite()) {
    throw InvalidArgument("expm_frechet_rank1: non-finite input");
  }
  const auto n = a.rows();
  // Small norms use a lower Pade degree and small matrices do not repay
  // the bookkeeping; both go through the dense route.
  if (norm <= kEllLow.back() || n < 128) return expm_frechet<Scalar>(a, u * v.transpose());

  const int s = squarings_for<Scalar>(norm, kEll13);
  const double scale = std::ldexp(1.0, -s);
  const Mat<Scalar> x = a * scale;
  const auto b = pade_coefficients(13);
  const auto powers = even_powers(x, 13);
  const auto& a2 = powers[1];
  const auto& a4 = powers[2];
  const auto& a6 = powers[3];
  const auto id = Mat<Scalar>::Identity(n, n);

  const Mat<Scalar> w1 = b[13] * a6 + b[11] * a4 + b[9] * a2;
  Mat<Scalar> w(n, n);
  w.noalias() = a6 * w1;
  w += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Mat<Scalar> z1 = b[12] * a6 + b[10] * a4 + b[8] * a2;
  Mat<Scalar> pv(n, n);
  pv.noalias() = a6 * z1;
  pv += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  Mat<Scalar> pu(n, n);
  pu.noalias() = x * w;

  // Derivatives of the even powers and of U, V along E = scale u v^T, all
  // in factored form.
  const LowRank<Scalar> e{u * scale, v};
  const auto xe = times_left(x, e);
  const auto ex = times_right(e, x);
  const auto m2 = combine<Scalar>({{1.0, &xe}, {1.0, &ex}});
  const auto a2m2 = times_left(a2, m2);
  const auto m2a2 = times_right(m2, a2);
  const auto m4 = combine<Scalar>({{1.0, &a2m2}, {1.0, &m2a2}});
  const auto a4m2 = times_left(a4, m2);
  const auto m4a2 = times_right(m4, a2);
  const auto m6 = combine<Scalar>({{1.0, &a4m2}, {1.0, &m4a2}});

  const auto lw1 = combine<Scalar>({{b[13], &m6}, {b[11], &m4}, {b[9], &m2}});
  const auto a6lw1 = times_left(a6, lw1);
  const auto m6w1 = times_right(m6, w1);
  const auto lw = combine<Scalar>(
      {{1.0, &a6lw1}, {1.0, &m6w1}, {b[7], &m6}, {b[5], &m4}, {b[3], &m2}});
  const auto xlw = times_left(x, lw);
  const auto ew = times_right(e, w);
  const auto lu = combine<Scalar>({{1.0, &xlw}, {1.0, &ew}});

  const auto lz1 = combine<Scalar>({{b[12], &m6}, {b[10], &m4}, {b[8], &m2}});
  const auto a6lz1 = times_left(a6, lz1);
  const auto m6z1 = times_right(m6, z1);
  const auto lv = combine<Scalar>(
      {{1.0, &a6lz1}, {1.0, &m6z1}, {b[6], &m6}, {b[4], &m4}, {b[2], &m2}});

  ExpmFrechet<Scalar> out;
  LowRank<Scalar> frechet;
  {
    Eigen::PartialPivLU<Mat<Scalar>> lu_fact(pv - pu);
    out.expm = lu_fact.solve(pu + pv);
    // L = (V - U)^{-1} [(Lu + Lv) + (Lu - Lv) R]
    const auto diff = combine<Scalar>({{1.0, &lu}, {-1.0, &lv}});
    const auto diff_r = times_right(diff, out.expm);
    auto rhs = combine<Scalar>({{1.0, &lu}, {1.0, &lv}, {1.0, &diff_r}});
    rhs.u = lu_fact.solve(rhs.u);
    frechet = std::move(rhs);
  }

  // Squaring: L <- R L + L R doubles the rank at most. Stay factored while
  // that is cheaper than two dense products.
  Mat<Scalar> tmp(n, n);
  int k = 0;
  for (; k < s && 6 * frechet.rank() <= n; ++k) {
    const auto rl = times_left(out.expm, frechet);
    const auto lr = times_right(frechet, out.expm);
    frechet = combine<Scalar>({{1.0, &rl}, {1.0, &lr}});
    tmp.noalias() = out.expm * out.expm;
    out.expm.swap(tmp);
  }
  out.frechet = dense(frechet);
  for (; k < s; ++k) {
    tmp.noalias() = out.expm * out.frechet;
    tmp.noalias() += out.frechet * out.expm;
    out.frechet.swap(tmp);
    tmp.noalias() = out.expm * out.expm;
    out.expm.swap(tmp);
  }
  return out;
}

template RMat kron<double>(const RMat&, const RMat&);
template CMat kron<cplx>(const CMat&, const CMat&);
template RMat expm<double>(const RMat&);
template CMat expm<cplx>(const CMat&);
template ExpmFrechet<double> expm_frechet<double>(const RMat&, const RMat&);
template ExpmFrechet<cplx> expm_frechet<cplx>(const CMat&, const CMat&);
template ExpmFrechet<double> expm_frechet_rank1<double>(const RMat&, const RVec&, const RVec&);
template ExpmFrechet<cplx> expm_frechet_rank1<cplx>(const CMat&, const CVec&, const CVec&);
template int expm_squarings<double>(const RMat&);
template int expm_squarings<cplx>(const CMat&);

}  // namespace coolopt::linalg
