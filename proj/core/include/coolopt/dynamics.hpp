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

// Time evolution under a fixed Lindbladian, phonon-number observables,
// sampled trajectories and exponential cooling-rate fits.

#include <string>
#include <vector>

#include "coolopt/fock.hpp"
#include "coolopt/liouville.hpp"

namespace coolopt::dynamics {

using fock::DensityMatrix;
using liouville::Superoperator;

/// rho(t) = exp(L t) rho0, Hermitised. t >= 0 in units of 1/nu.
DensityMatrix evolve(const Superoperator& l, const DensityMatrix& rho0, double t);

/// Re tr(n rho) with n = I (x) a^dagger a.
double mean_phonon(const DensityMatrix& rho);

struct Trajectory {
  std::vector<double> times;  // strictly increasing, units of 1/nu
  std::vector<double> nbar;
  std::string provenance;     // free-form description of scheme and params
};

inline constexpr int kDefaultSamples = 121;

/// n(t) on `samples` uniform points of [0, t_final], using a single step
/// propagator applied repeatedly.
Trajectory trajectory(const Superoperator& l, const DensityMatrix& rho0,
                      double t_final, int samples = kDefaultSamples,
                      std::string provenance = {});

struct FitOptions {
  double window_start = 5.0;   // samples with t < window_start are ignored
  int max_iterations = 100;
  double step_tolerance = 1e-10;
};

/// n(t) ~ nbar_inf + amplitude * exp(-rate * t).
struct RateFit {
  double rate = 0.0;
  double nbar_inf = 0.0;
  double amplitude = 0.0;
  double residual = 0.0;      // root-mean-square residual over the window
  int iterations = 0;
  int points = 0;
  double window_start = 0.0;
  bool converged = false;
  bool decaying = false;      // rate > 0; false flags a failed cooling fit
};

RateFit fit_rate(const Trajectory& traj, const FitOptions& options = {});

}  // namespace coolopt::dynamics
