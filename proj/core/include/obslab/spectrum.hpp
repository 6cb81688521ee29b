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

#include <cstdint>

#include "obslab/types.hpp"

namespace obslab {

// Symmetric tridiagonal H = -d2/dx2 + V on interior Dirichlet nodes:
// diagonal 2/h^2 + V_j, off-diagonal -1/h^2.
struct Tridiag {
  VecXd diag;
  VecXd off;
};

Tridiag assemble_hamiltonian(const Grid& grid, const Potential& V);

// Full eigendecomposition of the discrete Hamiltonian. Column k of `modes`
// is the k-th eigenvector scaled by 1/sqrt(h) so that the h-weighted
// quadrature makes the basis orthonormal: h * modes^T modes = I. Energies
// ascend and satisfy E_0 >= inf V >= 1.
struct HamiltonianSpectrum {
  Grid grid;
  Potential potential;
  VecXd energies;
  MatXd modes;

  int n() const { return static_cast<int>(energies.size()); }

  // coefficient transforms under the h-weighted inner product
  VecXcd to_coeffs(const VecXcd& u) const {
    return grid.h * (modes.transpose() * u);
  }
  VecXcd to_state(const VecXcd& c) const { return modes * c; }
};

HamiltonianSpectrum diagonalize(const Grid& grid, const Potential& V);

// --- potential construction -------------------------------------------------

VecXd sample_constant_potential(const Grid& grid, double value);
// 1 + amplitude * sin(x + phase) before the gauge shift
VecXd sample_sine_potential(const Grid& grid, double amplitude, double phase);
// smooth random Fourier sum with amplitude envelope, values in [-amp, amp] + 1
VecXd sample_random_potential(const Grid& grid, uint64_t seed, double amplitude);

// Smallest shift that makes min(V_raw) + theta >= 1 (zero if already there).
double auto_gauge_theta(const VecXd& V_raw);

// V -> V + theta; throws ConfigError if min + theta < 1. Differences between
// samples are preserved exactly; theta is recorded for reporting.
Potential gauge_shift(const VecXd& V_raw, double theta);

// --- functional calculus in the eigenbasis ----------------------------------

// e^{itH} applied to coefficient vectors: multiply by e^{i E_k t}.
VecXcd evolve_schrodinger(const VecXd& energies, const VecXcd& c, double t);
// e^{-tH}: multiply by e^{-E_k t}; throws ConfigError for t < 0.
VecXcd evolve_heat(const VecXd& energies, const VecXcd& c, double t);

// grid-space propagators (diagonalize once, rotate coefficients)
VecXcd propagate_schrodinger(const HamiltonianSpectrum& spec, const VecXcd& u0,
                             double t);
VecXcd propagate_heat(const HamiltonianSpectrum& spec, const VecXcd& u0,
                      double t);

// number of modes with sqrt(E_k) <= mu
int projector_rank(const VecXd& energies, double mu);

// Grid-space orthogonal projector onto modes with sqrt(E) <= mu under the
// h-weighted inner product: P = W_low * (h * W_low^T).
MatXd spectral_projector(const HamiltonianSpectrum& spec, double mu);

// F_mu(x, y) = sum_{sqrt(E_k) <= mu} cosh(y sqrt(E_k)) c_k v_k(x), computed
// in scaled form: field * e^{log_factor}. Values stay representable for
// y*mu beyond the naive overflow point; only genuinely unrepresentable
// results (log_factor itself out of range) throw NumericalError.
struct CoshExtension {
  MatXcd field;       // n x len(y_grid), scaled
  double log_factor;  // common log scale taken out of the sum
};

CoshExtension cosh_extension(const HamiltonianSpectrum& spec, const VecXcd& f,
                             double mu, const VecXd& y_grid);

// Fraction of mode k's mass in the outer 10% of the box on each side;
// large values flag wall contamination of a mode meant to live inside.
double edge_mass(const HamiltonianSpectrum& spec, int k);

}  // namespace obslab
