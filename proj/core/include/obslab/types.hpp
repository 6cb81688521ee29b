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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace obslab {

using Complex = std::complex<double>;
using VecXd = Eigen::VectorXd;
using VecXcd = Eigen::VectorXcd;
using MatXd = Eigen::MatrixXd;
using MatXcd = Eigen::MatrixXcd;

// Error taxonomy mapped to process exit codes by the CLI:
//   ConfigError -> 1, NumericalError -> 2, LemmaViolation -> 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A verified inequality failed beyond tolerance at full resolution.
class LemmaViolation : public std::runtime_error {
 public:
  explicit LemmaViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Uniform mesh of n interior Dirichlet nodes on [x_min, x_max];
// node j sits at x_min + (j+1)h with h = (x_max - x_min)/(n+1).
// All L2 norms downstream use the quadrature h * sum |u_j|^2.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n = 0;
  double h = 0.0;

  double node(int j) const { return x_min + (j + 1) * h; }
  VecXd nodes() const {
    VecXd x(n);
    for (int j = 0; j < n; ++j) x[j] = node(j);
    return x;
  }
};

Grid make_grid(double x_min, double x_max, int n);

double norm_h(const Grid& grid, const VecXcd& u);

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

// Finite union of disjoint intervals with its thickness certificate:
// every window [x, x+L] inside the box meets the set in measure >= zeta*L,
// and margin is the worst-window slack (min over windows of measure - zeta*L).
struct ThickSet {
  std::vector<Interval> intervals;
  double L = 0.0;
  double zeta = 0.0;
  double margin = 0.0;

  double measure() const {
    double m = 0.0;
    for (const auto& iv : intervals) m += iv.length();
    return m;
  }
};

// Potential samples on grid nodes after the gauge shift V -> V + theta
// that enforces the standing assumption V >= 1.
struct Potential {
  VecXd samples;
  double inf_val = 0.0;
  double sup_val = 0.0;
  double theta = 0.0;
};

}  // namespace obslab
