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

#include "obslab/spectrum.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "obslab/rng.hpp"

namespace obslab {

Tridiag assemble_hamiltonian(const Grid& grid, const Potential& V) {
  if (V.samples.size() != grid.n)
    throw ConfigError("assemble_hamiltonian: potential size does not match grid");
  double inv_h2 = 1.0 / (grid.h * grid.h);
  Tridiag t;
  t.diag = VecXd::Constant(grid.n, 2.0 * inv_h2) + V.samples;
  t.off = VecXd::Constant(grid.n - 1, -inv_h2);
  return t;
}

HamiltonianSpectrum diagonalize(const Grid& grid, const Potential& V) {
  Tridiag t = assemble_hamiltonian(grid, V);
  Eigen::SelfAdjointEigenSolver<MatXd> solver;
  solver.computeFromTridiagonal(t.diag, t.off);
  if (solver.info() != Eigen::Success)
    throw NumericalError("diagonalize: tridiagonal eigensolver did not converge");
  HamiltonianSpectrum spec;
  spec.grid = grid;
  spec.potential = V;
  spec.energies = solver.eigenvalues();
  spec.modes = solver.eigenvectors() / std::sqrt(grid.h);
  return spec;
}

VecXd sample_constant_potential(const Grid& grid, double value) {
  return VecXd::Constant(grid.n, value);
}

VecXd sample_sine_potential(const Grid& grid, double amplitude, double phase) {
  VecXd v(grid.n);
  for (int j = 0; j < grid.n; ++j)
    v[j] = 1.0 + amplitude * std::sin(grid.node(j) + phase);
  return v;
}

VecXd sample_random_potential(const Grid& grid, uint64_t seed,
                              double amplitude) {
  Rng rng(seed);
  constexpr int kModes = 6;
  double box = grid.x_max - grid.x_min;
  VecXd v = VecXd::Zero(grid.n);
  double weight_sum = 0.0;
  for (int m = 1; m <= kModes; ++m) {
    double w = 1.0 / m;
    double amp = w * rng.uniform(-1.0, 1.0);
    double phase = rng.uniform(0.0, 2.0 * M_PI);
    weight_sum += w;
    for (int j = 0; j < grid.n; ++j) {
      double x = 2.0 * M_PI * m * (grid.node(j) - grid.x_min) / box;
      v[j] += amp * std::sin(x + phase);
    }
  }
  v *= amplitude / weight_sum;
  return v.array() + 1.0;
}

double auto_gauge_theta(const VecXd& V_raw) {
  double lo = V_raw.minCoeff();
  return lo >= 1.0 ? 0.0 : 1.0 - lo;
}

Potential gauge_shift(const VecXd& V_raw, double theta) {
  Potential p;
  p.samples = V_raw.array() + theta;
  p.theta = theta;
  p.inf_val = p.samples.minCoeff();
  p.sup_val = p.samples.maxCoeff();
  if (p.inf_val < 1.0) {
    std::ostringstream os;
    os << "gauge_shift: shifted potential has min " << p.inf_val
       << " < 1; raise theta";
    throw ConfigError(os.str());
  }
  return p;
}

VecXcd evolve_schrodinger(const VecXd& energies, const VecXcd& c, double t) {
  if (energies.size() != c.size())
    throw ConfigError("evolve_schrodinger: coefficient size mismatch");
  VecXcd out(c.size());
  for (int k = 0; k < c.size(); ++k)
    out[k] = std::polar(1.0, energies[k] * t) * c[k];
  return out;
}

VecXcd evolve_heat(const VecXd& energies, const VecXcd& c, double t) {
  if (t < 0.0) throw ConfigError("evolve_heat: negative time");
  if (energies.size() != c.size())
    throw ConfigError("evolve_heat: coefficient size mismatch");
  VecXcd out(c.size());
  for (int k = 0; k < c.size(); ++k) out[k] = std::exp(-energies[k] * t) * c[k];
  return out;
}

VecXcd propagate_schrodinger(const HamiltonianSpectrum& spec, const VecXcd& u0,
                             double t) {
  return spec.to_state(evolve_schrodinger(spec.energies, spec.to_coeffs(u0), t));
}

VecXcd propagate_heat(const HamiltonianSpectrum& spec, const VecXcd& u0,
                      double t) {
  return spec.to_state(evolve_heat(spec.energies, spec.to_coeffs(u0), t));
}

int projector_rank(const VecXd& energies, double mu) {
  double cut = mu * mu;
  int r = 0;
  while (r < energies.size() && energies[r] <= cut) ++r;
  return r;
}

MatXd spectral_projector(const HamiltonianSpectrum& spec, double mu) {
  int r = projector_rank(spec.energies, mu);
  if (r == 0) return MatXd::Zero(spec.n(), spec.n());
  const auto low = spec.modes.leftCols(r);
  return low * (spec.grid.h * low.transpose());
}

CoshExtension cosh_extension(const HamiltonianSpectrum& spec, const VecXcd& f,
                             double mu, const VecXd& y_grid) {
  int r = projector_rank(spec.energies, mu);
  VecXcd c = spec.to_coeffs(f);
  CoshExtension ext;
  ext.field = MatXcd::Zero(spec.n(), y_grid.size());
  // largest exponent present: cosh(y sqrt(E)) <= e^{|y| sqrt(E)}
  double peak = 0.0;
  for (int k = 0; k < r; ++k) {
    double sq = std::sqrt(spec.energies[k]);
    for (int iy = 0; iy < y_grid.size(); ++iy)
      peak = std::max(peak, std::abs(y_grid[iy]) * sq);
  }
  ext.log_factor = peak;
  if (!std::isfinite(peak))
    throw NumericalError("cosh_extension: extension exponent overflows");
  for (int k = 0; k < r; ++k) {
    double sq = std::sqrt(spec.energies[k]);
    for (int iy = 0; iy < y_grid.size(); ++iy) {
      double y = y_grid[iy];
      // cosh(y sq) * e^{-peak}, assembled from exponentials of negative args
      double scaled = 0.5 * (std::exp(y * sq - peak) + std::exp(-y * sq - peak));
      ext.field.col(iy) += scaled * c[k] * spec.modes.col(k);
    }
  }
  return ext;
}

double edge_mass(const HamiltonianSpectrum& spec, int k) {
  if (k < 0 || k >= spec.n())
    throw ConfigError("edge_mass: mode index out of range");
  const Grid& g = spec.grid;
  double band = 0.1 * (g.x_max - g.x_min);
  double total = 0.0, outer = 0.0;
  for (int j = 0; j < g.n; ++j) {
    double w = spec.modes(j, k) * spec.modes(j, k);
    total += w;
    double x = g.node(j);
    if (x <= g.x_min + band || x >= g.x_max - band) outer += w;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace obslab
