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

#include "obslab/lemmas.hpp"

#include <cmath>
#include <functional>

namespace obslab {

namespace {

// golden-section minimization on [lo, hi]
double golden_min(const std::function<double(double)>& f, double lo,
                  double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

double cos2_integral(const std::vector<Interval>& omega, double lambda,
                     double x0) {
  if (!(lambda > 0.0)) throw ConfigError("cos2_integral: lambda must be positive");
  double total = 0.0;
  for (const auto& iv : omega) {
    total += 0.5 * iv.length() +
             std::sin(lambda * iv.length()) *
                 std::cos(lambda * (iv.a + iv.b - 2.0 * x0)) / (2.0 * lambda);
  }
  return total;
}

double cos2_inf(const std::vector<Interval>& omega, double lambda,
                int x0_resolution) {
  if (!(lambda > 0.0)) throw ConfigError("cos2_inf: lambda must be positive");
  if (x0_resolution < 8)
    throw ConfigError("cos2_inf: resolution too coarse to bracket the minimum");
  double period = M_PI / lambda;
  double best = cos2_integral(omega, lambda, 0.0);
  int best_i = 0;
  for (int i = 1; i < x0_resolution; ++i) {
    double v = cos2_integral(omega, lambda, period * i / x0_resolution);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double spacing = period / x0_resolution;
  double center = spacing * best_i;
  double polished = golden_min(
      [&](double x0) { return cos2_integral(omega, lambda, x0); },
      center - spacing, center + spacing);
  return std::min(best, polished);
}

double cos2_inf_closed(const std::vector<Interval>& omega, double lambda) {
  if (!(lambda > 0.0))
    throw ConfigError("cos2_inf_closed: lambda must be positive");
  double measure = 0.0;
  Complex Z(0.0, 0.0);
  for (const auto& iv : omega) {
    measure += iv.length();
    Z += std::sin(lambda * iv.length()) *
         std::polar(1.0, lambda * (iv.a + iv.b)) / (2.0 * lambda);
  }
  return 0.5 * measure - std::abs(Z);
}

double GaussPolyTestFn::f(double x) const {
  double u = x - c;
  return (p0 + u * (p1 + u * p2)) * std::exp(-q * u * u);
}

double GaussPolyTestFn::df(double x) const {
  double u = x - c;
  double P = p0 + u * (p1 + u * p2);
  double Pd = p1 + 2.0 * p2 * u;
  return (Pd - 2.0 * q * u * P) * std::exp(-q * u * u);
}

double GaussPolyTestFn::d2f(double x) const {
  double u = x - c;
  double P = p0 + u * (p1 + u * p2);
  double Pd = p1 + 2.0 * p2 * u;
  double Pdd = 2.0 * p2;
  return (Pdd - 2.0 * q * P - 4.0 * q * u * Pd + 4.0 * q * q * u * u * P) *
         std::exp(-q * u * u);
}

double solution_representation_check(const GaussPolyTestFn& fn, double mu,
                                     double s, double x_lo, double x_hi,
                                     int x_samples, double quad_step) {
  if (!(mu > 0.0))
    throw ConfigError("solution_representation_check: mu must be positive");
  if (x_samples < 2 || !(x_hi > x_lo) || !(quad_step > 0.0))
    throw ConfigError("solution_representation_check: bad evaluation window");
  double root = std::sqrt(mu);
  auto F = [&](double y) { return -fn.d2f(y) - mu * fn.f(y); };
  double worst = 0.0;
  for (int i = 0; i < x_samples; ++i) {
    double x = x_lo + (x_hi - x_lo) * i / (x_samples - 1);
    double hom = std::cos(root * (x - s)) * fn.f(s) +
                 std::sin(root * (x - s)) / root * fn.df(s);
    // Simpson quadrature of the Duhamel term from s to x (signed)
    int m = static_cast<int>(std::ceil(std::abs(x - s) / quad_step));
    if (m % 2) ++m;
    double duh = 0.0;
    if (m >= 2) {
      double hh = (x - s) / m;
      for (int j = 0; j <= m; ++j) {
        double y = s + j * hh;
        double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        duh += w * std::sin(root * (x - y)) / root * F(y);
      }
      duh *= hh / 3.0;
    }
    worst = std::max(worst, std::abs(fn.f(x) - (hom - duh)));
  }
  return worst;
}

}  // namespace obslab
