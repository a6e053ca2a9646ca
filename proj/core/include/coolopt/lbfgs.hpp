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

// Limited-memory BFGS with a strong-Wolfe line search (bracketing phase
// followed by safeguarded cubic-interpolation zoom).

#include <functional>
#include <string>
#include <vector>

#include "coolopt/linalg.hpp"

namespace coolopt::lbfgs {

using linalg::RVec;

/// Returns f(x) and writes grad f(x) into the second argument.
using Objective = std::function<double(const RVec& x, RVec& gradient)>;

struct IterationRecord {
  double loss = 0.0;
  double gradient_norm = 0.0;  // infinity norm
};

/// Called with the iteration count (0 for the start), the iterate and its
/// record.
using Observer = std::function<void(int iteration, const RVec& x, const IterationRecord& record)>;

struct Options {
  int history = 10;
  double c1 = 1e-4;
  double c2 = 0.9;
  double gradient_tolerance = 1e-8;             // infinity norm
  double relative_decrease_tolerance = 1e-12;
  int stall_iterations = 3;
  int max_iterations = 500;
  int max_line_search_evaluations = 40;
  // Relative resolution of f. Once a bracket cannot change f by more than
  // this, the search gives up and minimize() reports a stall.
  double noise_floor = 1e-13;
  double max_step = 1e10;
  Observer observer;  // optional
};

enum class Termination {
  gradient,             // ||g||_inf below tolerance
  stalled,              // relative decrease below tolerance for several steps,
                        // or no decrease resolvable above the noise floor
  max_iterations,
  line_search_failure,  // best point so far returned
  non_finite,           // objective returned NaN/Inf at the start
};

std::string to_string(Termination t);

struct Result {
  RVec x;
  double f = 0.0;
  RVec gradient;
  int iterations = 0;
  int evaluations = 0;
  Termination termination = Termination::max_iterations;
  std::vector<IterationRecord> history;  // entry 0 is the starting point
};

Result minimize(const Objective& objective, RVec x0, const Options& options = {});

}  // namespace coolopt::lbfgs
