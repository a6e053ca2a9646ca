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

#include "coolopt/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "coolopt/error.hpp"
#include "coolopt/hermitian_basis.hpp"

namespace coolopt::dynamics {
namespace {

using linalg::RMat;
using linalg::RVec;

DensityMatrix from_coordinates(const liouville::HermitianBasis& basis,
                               const fock::SpaceSpec& space, const RVec& x) {
  linalg::CMat rho = basis.to_operator(x);
  if (!rho.allFinite()) throw NumericalError("evolve: propagation produced non-finite values");
  return DensityMatrix(space, std::move(rho));
}

void require_same_space(const Superoperator& l, const DensityMatrix& rho0) {
  if (!(l.space() == rho0.space())) {
    throw ShapeError("dynamics: Lindbladian and state live on different spaces");
  }
}

}  // namespace

DensityMatrix evolve(const Superoperator& l, const DensityMatrix& rho0, double t) {
  require_same_space(l, rho0);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("evolve: t must be >= 0");
  if (t == 0.0) return rho0;
  const liouville::HermitianBasis basis(l.space().dim());
  const RMat propagator = linalg::expm<double>(basis.superoperator(l.matrix()) * t);
  return from_coordinates(basis, l.space(), propagator * basis.coordinates(rho0.matrix()));
}

double mean_phonon(const DensityMatrix& rho) {
  const auto& space = rho.space();
  const int d = space.fock_dim();
  double total = 0.0;
  for (int i = 0; i < space.dim(); ++i) total += (i % d) * rho.matrix()(i, i).real();
  return total;
}

Trajectory trajectory(const Superoperator& l, const DensityMatrix& rho0,
                      double t_final, int samples, std::string provenance) {
  require_same_space(l, rho0);
  if (samples < 2) throw InvalidArgument("trajectory: need at least 2 samples");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw InvalidArgument("trajectory: t_final must be positive");
  }
  const liouville::HermitianBasis basis(l.space().dim());
  const double dt = t_final / (samples - 1);
  const RMat step = linalg::expm<double>(basis.superoperator(l.matrix()) * dt);
  const RVec observable = basis.coordinates(fock::phonon_number(l.space()));

  Trajectory out;
  out.provenance = std::move(provenance);
  out.times.reserve(samples);
  out.nbar.reserve(samples);
  RVec x = basis.coordinates(rho0.matrix());
  RVec next(x.size());
  for (int k = 0; k < samples; ++k) {
    out.times.push_back(k == samples - 1 ? t_final : k * dt);
    out.nbar.push_back(observable.dot(x));
    if (k + 1 < samples) {
      next.noalias() = step * x;
      x.swap(next);
    }
  }
  if (!std::all_of(out.nbar.begin(), out.nbar.end(), [](double v) { return std::isfinite(v); })) {
    throw NumericalError("trajectory: propagation produced non-finite values");
  }
  return out;
}

RateFit fit_rate(const Trajectory& traj, const FitOptions& options) {
  if (traj.times.size() != traj.nbar.size()) {
    throw InvalidArgument("fit_rate: times and nbar differ in length");
  }
  std::vector<double> t;
  std::vector<double> y;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] >= options.window_start) {
      t.push_back(traj.times[i]);
      y.push_back(traj.nbar[i]);
    }
  }
  if (t.size() < 10) throw InvalidArgument("fit_rate: fewer than 10 samples in the fit window");

  RateFit fit;
  fit.window_start = options.window_start;
  fit.points = static_cast<int>(t.size());

  // Initial guess: log-linear regression of n(t) - n(t_final) over the
  // samples where the difference is still clearly positive.
  const double tail = y.back();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  const double head = y.front() - tail;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double diff = y[i] - tail;
    if (head > 0.0 && diff > 1e-3 * head) {
      const double ly = std::log(diff);
      sx += t[i];
      sy += ly;
      sxx += t[i] * t[i];
      sxy += t[i] * ly;
      ++used;
    }
  }
  double rate = 1.0 / std::max(t.back() - t.front(), 1e-12);
  double log_amp = std::log(std::max(std::abs(head), 1e-300)) + rate * t.front();
  if (used >= 2) {
    const double denom = used * sxx - sx * sx;
    if (denom > 0.0) {
      const double slope = (used * sxy - sx * sy) / denom;
      if (slope < 0.0) {
        rate = -slope;
        log_amp = (sy - slope * sx) / used;
      }
    }
  }

  // Gauss-Newton on (nbar_inf, amplitude, rate), amplitude referenced to t=0.
  Eigen::Vector3d p(tail, std::exp(log_amp), rate);
  auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < t.size(); ++i) {
      r(i) = q(0) + q(1) * std::exp(-q(2) * t[i]) - y[i];
    }
    return r.squaredNorm();
  };
  Eigen::VectorXd r;
  double cost = residuals(p, r);
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(t.size()), 3);
  for (fit.iterations = 0; fit.iterations < options.max_iterations; ++fit.iterations) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double e = std::exp(-p(2) * t[i]);
      jac(i, 0) = 1.0;
      jac(i, 1) = e;
      jac(i, 2) = -p(1) * t[i] * e;
    }
    const Eigen::Vector3d step = jac.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    // Backtrack until the cost does not increase.
    double scale = 1.0;
    Eigen::Vector3d trial;
    Eigen::VectorXd trial_r;
    double trial_cost = cost;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      trial = p + scale * step;
      trial_cost = residuals(trial, trial_r);
      if (std::isfinite(trial_cost) && trial_cost <= cost) {
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) {
      fit.converged = true;  // no descent left at working precision
      break;
    }
    const double rel_step =
        (scale * step).cwiseAbs().cwiseQuotient(p.cwiseAbs().cwiseMax(1e-300)).maxCoeff();
    p = trial;
    r = trial_r;
    cost = trial_cost;
    if (rel_step < options.step_tolerance) {
      fit.converged = true;
      ++fit.iterations;
      break;
    }
  }

  fit.nbar_inf = p(0);
  fit.amplitude = p(1);
  fit.rate = p(2);
  fit.residual = std::sqrt(cost / static_cast<double>(t.size()));
  fit.decaying = fit.rate > 0.0;
  return fit;
}

}  // namespace coolopt::dynamics
