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


// coolopt: run and validate experiment configs.

#include <iostream>

#include <CLI11.hpp>

#include "app/config.hpp"
#include "app/runner.hpp"
#include "coolopt/version.hpp"

int main(int argc, char** argv) {
  using namespace coolopt::app;
  CLI::App cli{"Laser-cooling simulation and optimal control for trapped ions"};
  cli.set_version_flag("--version", coolopt::kVersion);
  cli.require_subcommand(1);

  std::string run_config;
  RunOptions options;
  int threads = 0;
  auto* run_cmd = cli.add_subcommand("run", "Execute a config and write CSV plus manifest");
  run_cmd->add_option("config", run_config, "Experiment config file")->required();
  run_cmd->add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  run_cmd->add_option("--threads", threads, "Worker threads (overrides [run] threads)")
      ->check(CLI::PositiveNumber);

  std::string validate_config;
  auto* validate_cmd = cli.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("config", validate_config, "Experiment config file")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*validate_cmd) {
      const auto config = load_config(validate_config);
      std::cout << validate_config << ": ok (" << coolopt::schemes::to_string(config.scheme)
                << ", mode " << to_string(config.mode) << ")\n";
      return kOk;
    }
    const auto config = load_config(run_config);
    if (threads > 0) options.threads = threads;
    const auto outcome = run(config, options, std::cerr);
    if (outcome.exit_code != kOk) {
      std::cerr << "FAILED: " << outcome.error << "\n";
    }
    std::cout << outcome.csv_path << "\n" << outcome.manifest_path << "\n";
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}
