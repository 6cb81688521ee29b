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

#include <string>
#include <utility>
#include <vector>

#include "obslab/types.hpp"

namespace obslab {

struct FitReport {
  std::string model;  // "log C = a + b/T^2" | "log C = a + b/T" | "log C = a + b*mu"
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
  double ss_res = 0.0;
  std::vector<std::pair<double, double>> points;  // (parameter, constant)
};

// Ordinary least squares y = a + b x with coefficient of determination.
void ols(const std::vector<double>& x, const std::vector<double>& y, double* a,
         double* b, double* r2, double* ss_res);

// Fits log(constant) against the regressor named by `model`:
// "invT2" -> 1/T^2, "invT" -> 1/T, "mu" -> mu, "mu2" -> mu^2.
// Requires >= 4 points and positive constants (ConfigError otherwise).
FitReport cost_fit(const std::vector<std::pair<double, double>>& points,
                   const std::string& model);

}  // namespace obslab
