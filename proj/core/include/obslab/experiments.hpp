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

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "obslab/types.hpp"

namespace obslab {

// Parsed and schema-checked experiment configuration. Unknown keys anywhere
// in the document are rejected; tolerances must be positive.
struct ExperimentConfig {
  struct GridCfg {
    double x_min = -10.0;
    double x_max = 10.0;
    int n = 256;
  } grid;

  struct PotentialCfg {
    std::string kind = "sine";  // constant | sine | random
    double value = 1.0;         // constant
    double amplitude = 1.0;     // sine / random
    double phase = 0.0;         // sine
    uint64_t seed = 1;          // random
    bool gauge_auto = true;
    double gauge_theta = 0.0;   // used when gauge_auto is false
  } potential;

  struct ThicksetCfg {
    std::string kind = "periodic";  // periodic | random | explicit | full
    double L = 1.0;
    double zeta = 0.3;
    double offset = 0.0;  // fraction of the period, periodic kind only
    uint64_t seed = 1;
    std::vector<Interval> intervals;  // explicit kind
  } thickset;

  struct ExperimentCfg {
    std::string name;  // one of the nine catalog names
    uint64_t seed = 1;
    std::map<std::string, double> params;
    std::map<std::string, std::vector<double>> sweeps;
    std::map<std::string, double> tolerances;
  } experiment;

  struct OutputCfg {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json"};
  } output;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);

struct ExperimentInfo {
  std::string name;
  std::string description;
};

// The nine experiment kinds, in listing order.
const std::vector<ExperimentInfo>& experiment_catalog();

// Dispatches to the named experiment; writes artifacts plus run.json into
// the output directory. Errors surface as the shared exception taxonomy
// (ConfigError/NumericalError/LemmaViolation), which callers map to exit
// codes.
void run_experiment(const ExperimentConfig& cfg,
                    const std::string& config_path);

}  // namespace obslab
