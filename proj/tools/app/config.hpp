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


// Experiment configuration files for the coolopt command line.
//
// A config is a flat list of `key = value` lines grouped under `[section]`
// headers; `#` starts a comment. Every key is checked against the schema of
// its section before any computation starts, and every diagnostic carries
// the offending line.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "coolopt/lbfgs.hpp"
#include "coolopt/schemes.hpp"

namespace coolopt::app {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class Mode { optimize, scan1d, scan2d, evolve, steady, gradcheck, table1 };

std::string to_string(Mode mode);

struct ScanGrid {
  std::string param;
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string source;  // path or label used in diagnostics
  std::string text;    // verbatim file contents, copied into the manifest

  schemes::SchemeId scheme = schemes::SchemeId::rwsc;
  schemes::PhysicalConstants consts;  // resolved, units of nu
  std::string units = "nu";
  double nu_mhz = 0.0;                // set when units = mhz

  int fock_dim = 10;
  double nbar0 = 1.0;
  int initial_level = 0;

  Mode mode = Mode::optimize;
  std::vector<double> horizons;  // T, units of 1/nu
  std::string output;            // CSV file name inside the output directory
  int threads = 1;

  // [params]: every scheme parameter, units of nu. Missing entries fall
  // back to the scheme's default starting point.
  std::map<std::string, double> params;
  std::vector<std::string> free;

  struct Scan1d {
    ScanGrid grid;
    std::vector<std::string> inner;
  } scan1d;

  struct Scan2d {
    ScanGrid first;
    ScanGrid second;
  } scan2d;

  struct Evolve {
    double t_final = 0.0;
    int samples = 121;
    double fit_window = 5.0;
  } evolve;

  struct Optimize {
    std::vector<std::vector<double>> starts;  // free-parameter order
    lbfgs::Options lbfgs;
    double rate_time = 0.0;  // > 0: also fit W on [0, rate_time]
    double fit_window = 5.0;
    int samples = 121;
  } optimize;

  struct GradCheck {
    int points = 20;
    unsigned seed = 1;
    double spread = 0.2;  // relative perturbation around [params]
    double tolerance = 1e-6;
  } gradcheck;

  struct Table1 {
    std::vector<double> horizons{300.0, 700.0, 1200.0};
    double eval_time = 1200.0;
    int samples = 121;
    double fit_window = 5.0;
    bool eit3_row = true;
  } table1;
};

/// Parses and validates config text; `source` labels diagnostics.
ExperimentConfig parse_config(const std::string& text, const std::string& source);

/// Reads and parses a config file.
ExperimentConfig load_config(const std::string& path);

/// Full parameter vector for the scheme: [params] entries over the
/// scheme's default start.
schemes::ControlParams resolved_params(const ExperimentConfig& config);

}  // namespace coolopt::app
