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


// Executes an experiment config: CSV output plus a JSON run manifest.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "config.hpp"

namespace coolopt::app {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2 };

struct RunOptions {
  std::string out_dir = ".";
  std::optional<int> threads;  // overrides [run] threads
};

struct RunOutcome {
  int exit_code = kOk;
  std::string csv_path;
  std::string manifest_path;
  std::string error;  // empty on success
};

/// Runs the experiment. Numerical failures do not throw: rows computed so
/// far stay in the CSV, which then ends with a "# FAILED" line, and the
/// manifest records the error. I/O problems throw std::runtime_error.
RunOutcome run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

/// Formats a number the way every CSV column does ("%.12g", "nan").
std::string format_number(double v);

}  // namespace coolopt::app
