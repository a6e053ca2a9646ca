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

// Loss, exact gradient, L-BFGS minimization, multi-start and parameter
// scans for the final mean phonon number
//   loss(alpha) = tr(n exp(L(alpha) T) rho0).
//
// Everything runs in the real Hermitian basis: with A = T R(alpha) and
// real coordinates x0 of rho0 and y of n, loss = y . exp(A) x0. The
// gradient uses the adjoint identity
//   d loss / d alpha_i = <L(A^T, y x0^T), T R_i>_F,
// i.e. a single Frechet derivative for all parameters. The forward route
// (one Frechet derivative per parameter) is kept for cross-checks.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coolopt/fock.hpp"
#include "coolopt/lbfgs.hpp"
#include "coolopt/linalg.hpp"
#include "coolopt/schemes.hpp"

namespace coolopt::control {

using fock::DensityMatrix;
using fock::SpaceSpec;
using linalg::RMat;
using linalg::RVec;
using schemes::ControlParams;
using schemes::PhysicalConstants;
using schemes::SchemeId;

struct ControlProblem {
  SchemeId scheme;
  PhysicalConstants consts;
  SpaceSpec space;
  DensityMatrix rho0;
  double horizon = 0.0;                  // T, units of 1/nu
  std::vector<std::string> free;         // optimised, in this order
  std::map<std::string, double> fixed;   // held constant
  RVec initial_guess;                    // one entry per free parameter

  /// Throws InvalidArgument unless free and fixed partition the scheme's
  /// parameters, the guess matches `free`, T >= 0 and rho0 lives on `space`.
  void validate() const;

  /// Full parameter set for free values x.
  ControlParams assemble(const RVec& x) const;
};

/// Problem over all parameters of `scheme`, started from default_start().
ControlProblem make_problem(SchemeId scheme, const PhysicalConstants& consts,
                            const SpaceSpec& space, const DensityMatrix& rho0,
                            double horizon);

/// RWSC/SWSC: (delta, omega) = (-nu, 0.3 nu). EIT: the AC-Stark condition
/// delta_ac = nu at detuning 60 nu with omega_g / omega_r = 0.15 (both EIT4
/// detunings equal).
ControlParams default_start(SchemeId scheme, const PhysicalConstants& consts);

/// EIT parameters on the AC-Stark resonance delta_ac = nu for the given
/// detuning and omega_g / omega_r ratio.
ControlParams ac_stark_start(SchemeId scheme, const PhysicalConstants& consts,
                             double delta, double ratio);

/// The scheme family R(alpha) = R_0 + sum_j alpha_j R_j in real coordinates,
/// plus coordinates of rho0 and of the phonon-number operator. Built once per
/// (scheme, constants, space, rho0); shared between models.
class RealFamily {
 public:
  RealFamily(SchemeId scheme, const PhysicalConstants& consts,
             const SpaceSpec& space, const DensityMatrix& rho0);

  SchemeId scheme() const noexcept { return scheme_; }
  const RMat& fixed() const noexcept { return r0_; }
  const std::vector<RMat>& generators() const noexcept { return r_; }
  const RVec& initial() const noexcept { return x0_; }
  const RVec& observable() const noexcept { return y_; }

  /// R(alpha) for all parameter values in scheme order.
  RMat at(const std::vector<double>& values) const;

 private:
  SchemeId scheme_;
  RMat r0_;
  std::vector<RMat> r_;
  RVec x0_;
  RVec y_;
};

enum class GradientRoute { adjoint, forward };

/// Loss and gradient over the free parameters of one problem.
class LossModel {
 public:
  explicit LossModel(const ControlProblem& problem);
  LossModel(const ControlProblem& problem, std::shared_ptr<const RealFamily> family);

  const ControlProblem& problem() const noexcept { return problem_; }
  const std::shared_ptr<const RealFamily>& family() const noexcept { return family_; }

  double loss(const RVec& x) const;

  /// Returns the loss; writes d loss / d x into `gradient`.
  double grad(const RVec& x, RVec& gradient,
              GradientRoute route = GradientRoute::adjoint) const;

 private:
  RMat generator(const RVec& x) const;  // T R(alpha)
  [[noreturn]] void rethrow(const RVec& x, const std::exception& e) const;

  ControlProblem problem_;
  std::shared_ptr<const RealFamily> family_;
  std::vector<std::size_t> free_index_;
};

double loss(const ControlProblem& problem, const RVec& x);
double grad(const ControlProblem& problem, const RVec& x, RVec& gradient);

struct MinimizeOptions {
  lbfgs::Options lbfgs;
  /// Per-free-parameter scales; empty selects default_scales().
  RVec scales;
  /// Optional per-iteration report: parameters in physical units, gradient
  /// norm in the scaled coordinates the optimiser sees. Replaces any
  /// observer set in `lbfgs`.
  std::function<void(int iteration, const ControlParams& params, double loss,
                     double gradient_norm)>
      progress;
};

/// 10 for EIT detunings, 1 otherwise. The optimizer works on x / scale.
RVec default_scales(const ControlProblem& problem);

struct OptimResult {
  ControlParams params_opt;
  RVec x_opt;                  // free values, problem order
  double loss_opt = 0.0;
  double initial_loss = 0.0;
  double gradient_norm = 0.0;  // infinity norm of d loss / d x
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;      // gradient_norm below the tolerance
  lbfgs::Termination termination = lbfgs::Termination::max_iterations;
  std::vector<lbfgs::IterationRecord> history;
  RVec scales;
};

OptimResult minimize(const ControlProblem& problem, const MinimizeOptions& options = {});
OptimResult minimize(const LossModel& model, const MinimizeOptions& options = {});

/// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
/// written by index; the set of calls does not depend on `threads`.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

struct MultistartResult {
  std::vector<std::optional<OptimResult>> runs;  // empty entry: run failed
  std::vector<std::string> errors;
  std::size_t best = 0;

  const OptimResult& best_result() const { return *runs.at(best); }
};

/// minimize() from every start; the lowest loss wins (ties to the earlier
/// start). Throws NumericalError if every run failed.
MultistartResult multistart(const ControlProblem& problem, const std::vector<RVec>& starts,
                            const MinimizeOptions& options = {}, int threads = 1);

struct ScanRow {
  double value = 0.0;
  RVec inner;          // optimal inner parameters
  double nbar = 0.0;   // NaN when failed
  bool converged = false;
  std::string error;   // empty on success
};

/// For each grid value of `scan_param`, minimizes over `inner_free`, warm
/// started from the previous point's optimum. The remaining parameters keep
/// their values from problem.fixed / problem.initial_guess.
std::vector<ScanRow> scan1d(const ControlProblem& problem, const std::string& scan_param,
                            const std::vector<double>& grid,
                            const std::vector<std::string>& inner_free,
                            const MinimizeOptions& options = {});

struct GridCell {
  double v1 = 0.0;
  double v2 = 0.0;
  double nbar = 0.0;   // NaN when failed
  std::string error;
};

/// Loss on grid1 x grid2 (row-major in grid1), no inner optimization.
std::vector<GridCell> scan2d(const ControlProblem& problem, const std::string& p1,
                             const std::vector<double>& grid1, const std::string& p2,
                             const std::vector<double>& grid2, int threads = 1);

}  // namespace coolopt::control
