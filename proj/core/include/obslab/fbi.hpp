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

#include <functional>
#include <vector>

#include "obslab/spectrum.hpp"
#include "obslab/thickset.hpp"
#include "obslab/types.hpp"

namespace obslab {

// Gaussian time-window transform at scale h:
//   (T_h Gamma)(z) = 2^{1/4} (2 pi h)^{-3/4} int e^{-(z+t)^2/(2h)} Gamma(t) dt.
// It intertwines the free Schrodinger flow in t with an elliptic problem in
// the complex time z = tau + i s.
struct FbiConfig {
  double h = 0.1;    // transform scale, in (0, 1)
  double T = 0.5;    // sets the cutoff geometry: plateau [2T, 8T], support [0, 10T]
  double dt = 0.0;   // time-quadrature step; 0 -> sqrt(h)/20
  double ds = 1e-3;  // centered-difference step for the s-derivative

  double dt_or_default() const;
};

// C^2 plateau cutoff: 0 for t <= 0, quintic-smoothstep ramp on [0, 2T],
// 1 on [2T, 8T], mirrored ramp down on [8T, 10T], 0 beyond. The ramp slope
// peaks at 15/(16T) < 2/T.
double chi(double t, double T);
double chi_prime(double t, double T);

// Trapezoid quadrature of the transform for samples gamma(t_j) given on the
// uniform grid; integration restricted to |t + Re z| <= 8 sqrt(h) + |Im z|
// (the discarded Gaussian tail is below 1e-14 of the peak). A nonempty
// sample outside a grid covering the Gaussian support sets *truncated.
VecXcd fbi_transform(const std::vector<VecXcd>& gamma, const VecXd& t_grid,
                     double h, Complex z, bool* truncated = nullptr);

// Same transform for Gamma(t) = w(t) e^{itH} f evaluated per eigenmode
// (the flow is diagonal, so each coefficient is a scalar Gaussian-Fourier
// integral); w is chi, chi', or any weight on [0, 10T]. Returns eigenbasis
// coefficients of (T_h Gamma)(z).
VecXcd fbi_of_flow(const HamiltonianSpectrum& spec, const VecXcd& f_coeffs,
                   const FbiConfig& cfg,
                   const std::function<double(double)>& weight, Complex z);

struct IntertwineReport {
  double max_rel_residual = 0.0;
  double w_scale = 0.0;  // max transform norm over the grid (the normalizer)
  struct Row {
    double tau = 0.0, s = 0.0, residual = 0.0, lhs_norm = 0.0, rhs_norm = 0.0;
  };
  std::vector<Row> rows;
};

// Residual of the intertwining identity
//   (d/ds + dx^2 - V) (T_h chi F)(z) = -T_h( i chi' F )(z),  F(t) = e^{itH} f,
// with a centered difference in s and the discrete H in x, reported relative
// to the largest transform norm over the (tau, s) grid. Converges at second
// order in (ds, dt). With `mask_free` false the flow is observed through the
// mask inside the transform (exploratory; the identity itself is for the
// free flow).
IntertwineReport intertwine_residual(const HamiltonianSpectrum& spec,
                                     const VecXcd& f_coeffs,
                                     const FbiConfig& cfg,
                                     const VecXd& tau_grid,
                                     const VecXd& s_grid, bool mask_free,
                                     const MaskResult* m = nullptr);

struct ReproduceRecord {
  double error = 0.0;   // || F(tau) - (2 pi h)^{-1/2} int e^{-(tau-t)^2/2h} chi F ||
  double bound = 0.0;   // 2 e^{-18 T^2/h} ||f|| + sqrt(32h/pi) sqrt(1 + 1/T^2) ||Hf||
  double f_norm = 0.0;
  double Hf_norm = 0.0;
};

// Gaussian reproduction defect of the evolved state at a plateau time
// tau in [4T, 6T], against the closed-form bound.
ReproduceRecord gaussian_reproduce_check(const HamiltonianSpectrum& spec,
                                         const VecXcd& f_coeffs, double h,
                                         double T, double tau);

// Positive barrier for the divergence-form conversion: phi'' = V phi with
// phi(a) = 1, phi'(a) = 0, integrated by classical RK4 on the (phi, phi')
// system. For V >= 1 on [a, b]: 1 <= phi <= e^{(b-a)^2 ||V||_inf}, phi
// non-decreasing, and discrete convexity phi'' >= phi holds.
struct BarrierSolution {
  double a = 0.0, b = 0.0, step = 0.0;
  VecXd phi;
  VecXd dphi;
  double upper_bound = 0.0;  // e^{(b-a)^2 ||V||_inf}
};

BarrierSolution solve_barrier(const std::function<double(double)>& V, double a,
                              double b, double step);

}  // namespace obslab
