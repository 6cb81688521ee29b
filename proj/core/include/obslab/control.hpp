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

#include "obslab/fit.hpp"
#include "obslab/gramian.hpp"
#include "obslab/types.hpp"

namespace obslab {

// Minimal-norm exact control synthesized by duality. The adjoint datum phi0
// solves G_T phi0 = -i (u0 - e^{-iTH} u1); the control is f(t) = 1_Omega
// e^{itH} phi0 and Duhamel gives u(T) = e^{iTH}(u0 - i G_T phi0) = u1.
// Derivation of the sign, once: the controlled flow is
//   u(t) = e^{itH} ( u0 - i int_0^t e^{-irH} 1_Omega f(r) dr ),
// so u(T) = u1 iff i G_T phi0 = u0 - e^{-iTH} u1. All vectors live in
// eigenbasis coordinates.
struct ControlSolution {
  VecXcd phi0;
  double T = 0.0;
  double cost = 0.0;            // <G phi0, phi0> = int_0^T ||f||^2 dt
  double endpoint_error = 0.0;  // ||u(T) - u1|| / max(||u1||, 1)
  int cg_iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

// Jacobi-preconditioned conjugate gradients on the Hermitian PSD Gramian.
// Throws NumericalError with the residual history on stagnation (the
// signature of a large observability constant at this T).
ControlSolution hum_solve(const HamiltonianSpectrum& spec, const MaskResult& m,
                          double T, const VecXcd& u0_coeffs,
                          const VecXcd& u1_coeffs, double tol, int max_iter);

// Control samples f(t_j) on the uniform grid t_j = j*T/steps, masked on the
// grid, returned as coefficient vectors (column j = sample j).
MatXcd sample_control(const HamiltonianSpectrum& spec, const MaskResult& m,
                      const VecXcd& phi0, double T, int steps);

// Independent endpoint verification: alternates the exact eigenbasis
// rotation e^{iE dt} with symmetric half-kicks of the sampled source
// (second order in dt). Uses only the samples, not the closed-form time
// integrals that built the Gramian.
VecXcd simulate_controlled(const HamiltonianSpectrum& spec,
                           const MatXcd& control_coeff_samples,
                           const VecXcd& u0_coeffs, double T);

// Runs hum_solve across T_list and fits log(cost) against 1/T^2.
FitReport control_cost_vs_T(const HamiltonianSpectrum& spec,
                            const MaskResult& m, const VecXcd& u0_coeffs,
                            const VecXcd& u1_coeffs,
                            const std::vector<double>& T_list, double tol,
                            int max_iter);

}  // namespace obslab
