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

#include <vector>

#include "obslab/types.hpp"

namespace obslab {

// int_a^b cos^2(lambda (x - x0)) dx in closed form, summed over intervals:
//   (b-a)/2 + sin(lambda(b-a)) cos(lambda(a+b-2x0)) / (2 lambda).
// (cos^2 u = (1 + cos 2u)/2; the oscillatory part integrates to the sine
// term with a single factor 2 lambda in the denominator, which is what
// direct quadrature confirms.)
double cos2_integral(const std::vector<Interval>& omega, double lambda,
                     double x0);

// inf over x0 of the above for omega inside one unit window: a grid of
// x0_resolution points over the period [0, pi/lambda], polished by
// golden-section search around the grid minimizer.
double cos2_inf(const std::vector<Interval>& omega, double lambda,
                int x0_resolution = 2000);

// Closed-form infimum: the oscillatory parts add up to a single sinusoid in
// x0, Z = sum_n sin(lambda l_n) e^{i lambda (a_n + b_n)} / (2 lambda), and
//   inf = |omega|/2 - |Z|.
// Independent of the search; used as the oracle for cos2_inf.
double cos2_inf_closed(const std::vector<Interval>& omega, double lambda);

// Flat-case variation-of-constants identity
//   f(x) = cos(sqrt(mu)(x-s)) f(s) + sin(sqrt(mu)(x-s))/sqrt(mu) f'(s)
//          - int_s^x sin(sqrt(mu)(x-y))/sqrt(mu) F(y) dy,   F = -f'' - mu f,
// checked for a Gaussian-times-polynomial test family with symbolic
// derivatives; the Duhamel integral uses Simpson quadrature at `quad_step`.
struct GaussPolyTestFn {
  double q = 1.0;       // Gaussian decay e^{-q (x-c)^2}
  double c = 0.0;       // Gaussian center
  double p0 = 1.0, p1 = 0.0, p2 = 0.0;  // polynomial factor

  double f(double x) const;
  double df(double x) const;
  double d2f(double x) const;
};

double solution_representation_check(const GaussPolyTestFn& fn, double mu,
                                     double s, double x_lo, double x_hi,
                                     int x_samples = 201,
                                     double quad_step = 1e-3);

}  // namespace obslab
