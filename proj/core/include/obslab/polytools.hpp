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
#include <vector>

#include "obslab/types.hpp"

namespace obslab {

// Complex polynomial by ascending coefficients, degree capped at 32 (the
// companion-matrix root oracle stays well conditioned at desk scale).
struct ComplexPoly {
  std::vector<Complex> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex eval(Complex z) const;
};

ComplexPoly poly_from_roots(const std::vector<Complex>& roots, Complex leading);

// Roots via eigenvalues of the companion matrix; throws ConfigError above
// degree 32 and NumericalError if a root residual exceeds 1e-8 * scale.
std::vector<Complex> poly_roots(const ComplexPoly& P);

// max |P| on the circle |z - center| = r: 4096 samples plus 3 golden-section
// refinements around the best angle.
double circle_max(const ComplexPoly& P, Complex center, double r);

struct JensenResult {
  int N_actual = 0;
  double N_bound = 0.0;
  bool ok = false;  // N_actual <= N_bound
};

// Zero-counting bound: the number of roots in |z - a| <= r1 is at most
// (log M(r2) - log |P(a)|) / log(r2/r1), M(r2) = max_{|z-a|=r2} |P|.
// Requires P(a) != 0.
JensenResult jensen_zero_bound(const ComplexPoly& P, Complex a, double r1,
                               double r2);

// Three-circle convexity slack
//   log(r3/r2) log M(r1) + log(r2/r1) log M(r3) - log(r3/r1) log M(r2),
// which is >= 0 up to sampling error; one automatic refinement before
// declaring a violation.
double hadamard_three_circle_check(const ComplexPoly& P, double r1, double r2,
                                   double r3);

struct RemezResult {
  double lhs = 0.0;  // sup over the closed unit disk
  double rhs = 0.0;  // (6e / content)^degree * sup over E
  bool ok = false;
};

// Polynomial growth bound off a segment union E on a diameter of the unit
// disk (delta = 1 case; the 1-content of a segment union is half its
// length): sup_{B1} |P| <= (6e/(l/2))^N sup_E |P|.
RemezResult remez_check(const ComplexPoly& P,
                        const std::vector<Interval>& E_segments, double delta);

// One checker outcome in the shared verdict schema.
struct Verdict {
  std::string lemma;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = false;
};

std::string verdict_json(const Verdict& v);

}  // namespace obslab
