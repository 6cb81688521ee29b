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

#include "obslab/fit.hpp"

#include <cmath>

namespace obslab {

void ols(const std::vector<double>& x, const std::vector<double>& y, double* a,
         double* b, double* r2, double* ss_res) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("ols: need at least two matching points");
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw ConfigError("ols: regressor is constant");
  *b = sxy / sxx;
  *a = my - *b * mx;
  double res = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double e = y[i] - (*a + *b * x[i]);
    res += e * e;
  }
  *ss_res = res;
  *r2 = syy > 0.0 ? 1.0 - res / syy : 1.0;
}

FitReport cost_fit(const std::vector<std::pair<double, double>>& points,
                   const std::string& model) {
  if (points.size() < 4)
    throw ConfigError("cost_fit: need at least four sweep points");
  std::vector<double> x, y;
  x.reserve(points.size());
  y.reserve(points.size());
  for (const auto& [param, constant] : points) {
    if (!(constant > 0.0) || !std::isfinite(constant))
      throw ConfigError("cost_fit: constants must be positive and finite");
    double reg;
    if (model == "invT2")
      reg = 1.0 / (param * param);
    else if (model == "invT")
      reg = 1.0 / param;
    else if (model == "mu")
      reg = param;
    else if (model == "mu2")
      reg = param * param;
    else
      throw ConfigError("cost_fit: unknown model '" + model + "'");
    x.push_back(reg);
    y.push_back(std::log(constant));
  }
  FitReport rep;
  if (model == "invT2")
    rep.model = "log C = a + b/T^2";
  else if (model == "invT")
    rep.model = "log C = a + b/T";
  else if (model == "mu")
    rep.model = "log C = a + b*mu";
  else
    rep.model = "log C = a + b*mu^2";
  rep.points = points;
  ols(x, y, &rep.a, &rep.b, &rep.r2, &rep.ss_res);
  return rep;
}

}  // namespace obslab
