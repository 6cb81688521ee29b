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

#include "obslab/spectrum.hpp"
#include "obslab/thickset.hpp"
#include "obslab/types.hpp"

namespace obslab {

enum class GramKind { schrodinger, heat, highfreq, spectral };

// Hermitian PSD quadratic form of the observation integral in eigenbasis
// coordinates: <G c, c> = int_0^T || 1_Omega e^{itH} f ||^2 dt for f with
// coefficients c.
struct Gramian {
  MatXcd matrix;
  double T = 0.0;
  GramKind kind = GramKind::schrodinger;
  double mu = 0.0;  // cutoff for highfreq/spectral kinds
  double mask_measure = 0.0;
};

// Mask compressed to the eigenbasis: B_kj = h * sum_{m in Omega} v_k(m) v_j(m).
// A null mask means observation on the whole domain, where B is the identity.
MatXd mask_gram(const HamiltonianSpectrum& spec, const MaskResult* m);

// Closed-form time kernel psi(delta, T) = (e^{i delta T} - 1)/(i delta),
// psi(0, T) = T, with a series fallback for |delta T| < 1e-6 to avoid
// cancellation between near-degenerate eigenvalue pairs.
Complex psi_kernel(double delta, double T);

// G_kj = B_kj * psi(E_j - E_k, T): exact time integration of the observation
// quadratic form. Only spatial discretization error remains.
Gramian schrodinger_gramian(const HamiltonianSpectrum& spec,
                            const MaskResult* m, double T);

struct ObsConstant {
  double C = 0.0;           // 1/lambda_min
  double lambda_min = 0.0;
  VecXcd worst;             // minimizing eigenvector (worst-observed state)
};

// Sharp observability constant 1/lambda_min(G). Throws NumericalError
// ("not observable at this resolution") when lambda_min <= 1e-14 * ||G||.
ObsConstant observability_constant(const Gramian& G);

// Optimal constant 1/sigma(mu) in ||g|| <= C ||g||_Omega over the span of
// modes with sqrt(E) <= mu; sigma(mu)^2 is the smallest eigenvalue of the
// corresponding block of B. Throws ConfigError on rank 0 and NumericalError
// when the block is singular at resolution (more low modes than mask nodes).
double spectral_ineq_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                              double mu);

// Heat-flow Gramian: Gh_kj = B_kj (1 - e^{-(E_j+E_k)T})/(E_j+E_k).
MatXd heat_gramian(const VecXd& energies, const MatXd& B, double T);

// Partial-interval variant: int_{t1}^{t2} of the same integrand,
// Gh_kj = B_kj (e^{-(E_j+E_k)t1} - e^{-(E_j+E_k)t2})/(E_j+E_k).
MatXd partial_heat_gramian(const VecXd& energies, const MatXd& B, double t1,
                           double t2);

struct HeatConstant {
  double nu = 0.0;          // optimal constant in ||e^{-TH}f||^2 <= nu <Gh f, f>
  double shift_used = 0.0;  // Cholesky regularization shift, 0 if clean
  int rank = 0;             // modes kept after weight truncation
  VecXcd maximizer;         // generalized eigenvector achieving nu (real data)
};

// Largest generalized eigenvalue of (D, Gh) with D = diag(e^{-2 E_k T}).
// Modes with 2 E_k T >= 600 carry weights below double range and are
// truncated; a singular Gh is retried with an escalating diagonal shift
// which is reported in the result.
HeatConstant heat_obs_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                               double T);

// Full-mask closed form max_k 2 E_k e^{-2 E_k T} / (1 - e^{-2 E_k T}).
double heat_obs_constant_full_mask(const VecXd& energies, double T);

// T / lambda_min of the Schrodinger Gramian restricted to modes with
// sqrt(E) > mu; normalized so boundedness in T is the expected behavior for
// large mu. Always >= 1 (a window cannot observe better than the whole line).
double highfreq_obs_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                             double mu, double T);

// Optimal C in ||f||^2 <= (C/mu)||(H - mu) f||^2 + C ||f||^2_Omega as
// 1/lambda_min(M_mu), M_mu = diag((E_k - mu)^2 / mu) + B in the eigenbasis.
double resolvent_constant(const HamiltonianSpectrum& spec, const MatXd& B,
                          double mu);

// One draw of the heat interpolation inequality: the implied constant
//   C = ||e^{-tH}f|| / ( e^{3/(alpha(t-s))} ||e^{-tH}f||_Omega^{1-alpha}
//                         ||e^{-sH}f||^alpha ),
// kept in log form because the exponential prefactor overflows for small
// alpha(t-s). A vanishing observed norm at resolution flags the record as
// degenerate instead of producing an infinity.
struct InterpRecord {
  double log_C_impl = 0.0;
  bool degenerate = false;
};

InterpRecord interpolation_heat_check(const HamiltonianSpectrum& spec,
                                      const MatXd& B, const VecXcd& f_coeffs,
                                      double s, double t, double alpha);

// Telescoped heat observability bound along the dyadic times S_m = T/2^m:
//   a_m = ||u(S_m)||^2 e^{-99/(S_m - S_{m+1})},
//   K   = max_m max(0, a_m - a_{m+1}/4) / (T * I_m),
//   C   = e^{198/T} (4^{-depth} a_depth + K T I_partial) / I_total,
// where I_m is the observed mass on [S_{m+1}, S_m] and I_total on [0, T].
// Carried entirely in logs: the a_m underflow and e^{198/T} overflows double
// range in regimes the sweep must cover. C dominates the sharp constant nu
// by construction when evaluated at the generalized-eigenproblem maximizer.
struct TeleResult {
  double log_C = 0.0;
  double C = 0.0;  // exp(log_C), +inf if out of range
  double log_K = 0.0;
  std::vector<double> log_a;
  double tail = 0.0;  // e^{198/T} 4^{-depth} a_depth / I_total (log)
};

TeleResult telescoping_heat_observability(const HamiltonianSpectrum& spec,
                                          const MatXd& B, double T, int depth,
                                          const VecXcd& f_coeffs);

}  // namespace obslab
