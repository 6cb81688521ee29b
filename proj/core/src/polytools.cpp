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

#include "obslab/polytools.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "obslab/io.hpp"

namespace obslab {

namespace {

double golden_max_angle(const std::function<double(double)>& f, double lo,
                        double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
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
  return std::max(fc, fd);
}

double circle_max_impl(const ComplexPoly& P, Complex center, double r,
                       int samples) {
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i < samples; ++i) {
    double th = 2.0 * M_PI * i / samples;
    double v = std::abs(P.eval(center + std::polar(r, th)));
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  auto on_angle = [&](double th) {
    return std::abs(P.eval(center + std::polar(r, th)));
  };
  double spacing = 2.0 * M_PI / samples;
  double th0 = spacing * best_i;
  for (int refine = 0; refine < 3; ++refine) {
    best = std::max(best, golden_max_angle(on_angle, th0 - spacing,
                                           th0 + spacing));
    spacing *= 0.1;
  }
  return best;
}

}  // namespace

Complex ComplexPoly::eval(Complex z) const {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ComplexPoly poly_from_roots(const std::vector<Complex>& roots,
                            Complex leading) {
  ComplexPoly P;
  P.coeffs = {leading};
  for (Complex r : roots) {
    std::vector<Complex> next(P.coeffs.size() + 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < P.coeffs.size(); ++i) {
      next[i] -= r * P.coeffs[i];
      next[i + 1] += P.coeffs[i];
    }
    P.coeffs = std::move(next);
  }
  return P;
}

std::vector<Complex> poly_roots(const ComplexPoly& P) {
  int deg = P.degree();
  if (deg < 1) throw ConfigError("poly_roots: degree must be at least 1");
  if (deg > 32) throw ConfigError("poly_roots: degree capped at 32");
  Complex lead = P.coeffs.back();
  if (std::abs(lead) == 0.0)
    throw ConfigError("poly_roots: zero leading coefficient");
  MatXcd C = MatXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) C(i, deg - 1) = -P.coeffs[i] / lead;
  Eigen::ComplexEigenSolver<MatXcd> es(C);
  if (es.info() != Eigen::Success)
    throw NumericalError("poly_roots: companion eigensolver failed");
  std::vector<Complex> roots(deg);
  double coeff_scale = 0.0;
  for (const auto& c : P.coeffs) coeff_scale = std::max(coeff_scale, std::abs(c));
  for (int i = 0; i < deg; ++i) {
    roots[i] = es.eigenvalues()(i);
    double scale =
        coeff_scale * std::pow(std::max(1.0, std::abs(roots[i])), deg);
    if (std::abs(P.eval(roots[i])) > 1e-8 * scale)
      throw NumericalError("poly_roots: root residual beyond tolerance");
  }
  return roots;
}

double circle_max(const ComplexPoly& P, Complex center, double r) {
  if (!(r > 0.0)) throw ConfigError("circle_max: radius must be positive");
  return circle_max_impl(P, center, r, 4096);
}

JensenResult jensen_zero_bound(const ComplexPoly& P, Complex a, double r1,
                               double r2) {
  if (!(r1 > 0.0 && r2 > r1))
    throw ConfigError("jensen_zero_bound: need 0 < r1 < r2");
  double at_center = std::abs(P.eval(a));
  if (at_center == 0.0)
    throw ConfigError("jensen_zero_bound: P vanishes at the center");
  double M2 = circle_max(P, a, r2);
  JensenResult res;
  res.N_bound = (std::log(M2) - std::log(at_center)) / std::log(r2 / r1);
  for (Complex root : poly_roots(P))
    if (std::abs(root - a) <= r1) ++res.N_actual;
  res.ok = res.N_actual <= res.N_bound + 1e-9;
  return res;
}

double hadamard_three_circle_check(const ComplexPoly& P, double r1, double r2,
                                   double r3) {
  if (!(r1 > 0.0 && r2 > r1 && r3 > r2))
    throw ConfigError("hadamard_three_circle_check: need 0 < r1 < r2 < r3");
  auto slack_at = [&](int samples) {
    double m1 = std::log(circle_max_impl(P, Complex(0, 0), r1, samples));
    double m2 = std::log(circle_max_impl(P, Complex(0, 0), r2, samples));
    double m3 = std::log(circle_max_impl(P, Complex(0, 0), r3, samples));
    return std::log(r3 / r2) * m1 + std::log(r2 / r1) * m3 -
           std::log(r3 / r1) * m2;
  };
  double slack = slack_at(4096);
  if (slack < -1e-9) slack = slack_at(16384);
  if (slack < -1e-9) {
    std::ostringstream os;
    os << "three-circle convexity violated: slack " << slack << " at radii "
       << r1 << ", " << r2 << ", " << r3;
    throw LemmaViolation(os.str());
  }
  return slack;
}

RemezResult remez_check(const ComplexPoly& P,
                        const std::vector<Interval>& E_segments, double delta) {
  if (!(delta > 0.0)) throw ConfigError("remez_check: delta must be positive");
  int deg = P.degree();
  if (deg < 1) throw ConfigError("remez_check: degree must be at least 1");
  double len = 0.0;
  for (const auto& seg : E_segments) {
    if (!(seg.b > seg.a) || seg.a < -delta || seg.b > delta)
      throw ConfigError(
          "remez_check: segments must be nonempty inside [-delta, delta]");
    len += seg.length();
  }
  if (!(len > 0.0)) throw ConfigError("remez_check: empty segment union");
  double sup_E = 0.0;
  for (const auto& seg : E_segments) {
    int samples =
        std::max(64, static_cast<int>(2000.0 * seg.length() / delta));
    for (int i = 0; i <= samples; ++i) {
      double x = seg.a + seg.length() * i / samples;
      sup_E = std::max(sup_E, std::abs(P.eval(Complex(x, 0.0))));
    }
  }
  RemezResult res;
  res.lhs = circle_max(P, Complex(0, 0), delta);
  // 1-content of the segment union is len/2; the bound scales with delta
  res.rhs = std::pow(6.0 * M_E * delta / (0.5 * len), deg) * sup_E;
  res.ok = res.lhs <= res.rhs * (1.0 + 1e-9);
  return res;
}

std::string verdict_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["lemma"] = v.lemma;
  j["params"] = v.params;
  j["lhs"] = v.lhs;
  j["rhs"] = v.rhs;
  j["slack"] = v.slack;
  j["pass"] = v.pass;
  return j.dump();
}

}  // namespace obslab
