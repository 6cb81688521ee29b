// Copyright 2026 The obslab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "obslab/experiments.hpp"
#include "obslab/types.hpp"
#include "obslab/version.hpp"

namespace {

int run_command(const std::string& config_path) {
  obslab::ExperimentConfig cfg = obslab::parse_config(config_path);
  obslab::run_experiment(cfg, config_path);
  std::printf("%s: wrote %s/run.json\n", cfg.experiment.name.c_str(),
              cfg.output.directory.c_str());
  return 0;
}

int list_command(bool as_json) {
  const auto& catalog = obslab::experiment_catalog();
  if (as_json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& info : catalog)
      arr.push_back({{"name", info.name}, {"description", info.description}});
    std::printf("%s\n", arr.dump(2).c_str());
    return 0;
  }
  for (const auto& info : catalog)
    std::printf("%-16s %s\n", info.name.c_str(), info.description.c_str());
  return 0;
}

int validate_command(const std::string& config_path) {
  obslab::ExperimentConfig cfg = obslab::parse_config(config_path);
  std::printf("valid: %s\n", cfg.experiment.name.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for observation constants of "
               "one-dimensional Schrodinger operators"};
  app.set_version_flag("--version", std::string("obslab ") + obslab::kVersion);
  app.require_subcommand(1);

  std::string run_config, validate_config;
  bool list_json = false;
  CLI::App* run = app.add_subcommand("run", "run an experiment from a config");
  run->add_option("config", run_config, "JSON experiment configuration")
      ->required();
  CLI::App* list = app.add_subcommand("list", "list available experiments");
  list->add_flag("--json", list_json, "machine-readable listing");
  CLI::App* validate =
      app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", validate_config, "JSON experiment configuration")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are validation failures
  }

  try {
    if (run->parsed()) return run_command(run_config);
    if (list->parsed()) return list_command(list_json);
    if (validate->parsed()) return validate_command(validate_config);
  } catch (const obslab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const obslab::LemmaViolation& e) {
    std::fprintf(stderr, "lemma violation: %s\n", e.what());
    return 3;
  } catch (const obslab::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
