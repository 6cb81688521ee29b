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

#include "obslab/control.hpp"

#include <cmath>
#include <sstream>

namespace obslab {

ControlSolution hum_solve(const HamiltonianSpectrum& spec, const MaskResult& m,
                          double T, const VecXcd& u0_coeffs,
                          const VecXcd& u1_coeffs, double tol, int max_iter) {
  int n = spec.n();
  if (u0_coeffs.size() != n || u1_coeffs.size() != n)
    throw ConfigError("hum_solve: state size does not match spectrum");
  if (!(tol > 0.0) || max_iter < 1)
    throw ConfigError("hum_solve: need tol > 0 and max_iter >= 1");
  Gramian G = schrodinger_gramian(spec, &m, T);

  const Complex mi(0.0, -1.0);
  VecXcd b = mi * (u0_coeffs - evolve_schrodinger(spec.energies, u1_coeffs, -T));

  ControlSolution sol;
  sol.T = T;
  double b_norm = b.norm();
  if (b_norm == 0.0) {
    // u0 already flows to u1 freely; the zero control is optimal
    sol.phi0 = VecXcd::Zero(n);
    sol.converged = true;
    VecXcd cT = evolve_schrodinger(spec.energies, u0_coeffs, T);
    sol.endpoint_error =
        (cT - u1_coeffs).norm() / std::max(u1_coeffs.norm(), 1.0);
    return sol;
  }

  VecXcd precond(n);
  for (int k = 0; k < n; ++k) {
    double d = std::real(G.matrix(k, k));
    precond[k] = d > 1e-300 ? 1.0 / d : 1.0;
  }

  VecXcd x = VecXcd::Zero(n);
  VecXcd r = b;
  VecXcd z = precond.cwiseProduct(r);
  VecXcd p = z;
  double rz = std::real(r.dot(z));
  for (int it = 0; it < max_iter; ++it) {
    if (r.norm() <= tol * b_norm) break;
    VecXcd Gp = G.matrix * p;
    double pGp = std::real(p.dot(Gp));
    if (!(pGp > 0.0))
      throw NumericalError("hum_solve: Gramian lost positivity in CG");
    double alpha = rz / pGp;
    x += alpha * p;
    r -= alpha * Gp;
    sol.residual_history.push_back(r.norm() / b_norm);
    z = precond.cwiseProduct(r);
    double rz_new = std::real(r.dot(z));
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  sol.cg_iterations = static_cast<int>(sol.residual_history.size());
  sol.converged = r.norm() <= tol * b_norm;
  if (!sol.converged) {
    // distinguish slow progress from stagnation; the latter is the
    // signature of near-unobservability and deserves a hard error
    size_t q = sol.residual_history.size() * 3 / 4;
    double then = sol.residual_history[q];
    double now = sol.residual_history.back();
    if (now > 0.9 * then) {
      std::ostringstream os;
      os << "hum_solve stagnated at relative residual " << now << " after "
         << sol.cg_iterations << " iterations (T = " << T
         << "); the Gramian is nearly singular";
      throw NumericalError(os.str());
    }
  }
  sol.phi0 = x;

  VecXcd Gphi = G.matrix * sol.phi0;
  sol.cost = std::real(sol.phi0.dot(Gphi));
  const Complex i(0.0, 1.0);
  VecXcd cT =
      evolve_schrodinger(spec.energies, u0_coeffs - i * Gphi, T);
  sol.endpoint_error = (cT - u1_coeffs).norm() / std::max(u1_coeffs.norm(), 1.0);
  return sol;
}

MatXcd sample_control(const HamiltonianSpectrum& spec, const MaskResult& m,
                      const VecXcd& phi0, double T, int steps) {
  if (steps < 1) throw ConfigError("sample_control: need at least one step");
  int n = spec.n();
  MatXcd samples(n, steps + 1);
  for (int j = 0; j <= steps; ++j) {
    double t = T * j / steps;
    VecXcd state = spec.to_state(evolve_schrodinger(spec.energies, phi0, t));
    for (int g = 0; g < n; ++g)
      if (!m.indicator[g]) state[g] = 0.0;
    samples.col(j) = spec.to_coeffs(state);
  }
  return samples;
}

VecXcd simulate_controlled(const HamiltonianSpectrum& spec,
                           const MatXcd& control_coeff_samples,
                           const VecXcd& u0_coeffs, double T) {
  int n = spec.n();
  if (control_coeff_samples.rows() != n || u0_coeffs.size() != n)
    throw ConfigError("simulate_controlled: size mismatch");
  int steps = static_cast<int>(control_coeff_samples.cols()) - 1;
  if (steps < 1)
    throw ConfigError("simulate_controlled: need at least two samples");
  double dt = T / steps;
  const Complex i(0.0, 1.0);
  VecXcd c = u0_coeffs;
  VecXcd phase(n);
  for (int k = 0; k < n; ++k) phase[k] = std::polar(1.0, spec.energies[k] * dt);
  for (int j = 0; j < steps; ++j) {
    VecXcd kicked = c - (i * (0.5 * dt)) * control_coeff_samples.col(j);
    c = phase.asDiagonal() * kicked -
        (i * (0.5 * dt)) * control_coeff_samples.col(j + 1);
  }
  return c;
}

FitReport control_cost_vs_T(const HamiltonianSpectrum& spec,
                            const MaskResult& m, const VecXcd& u0_coeffs,
                            const VecXcd& u1_coeffs,
                            const std::vector<double>& T_list, double tol,
                            int max_iter) {
  std::vector<std::pair<double, double>> points;
  points.reserve(T_list.size());
  for (double T : T_list) {
    ControlSolution sol = hum_solve(spec, m, T, u0_coeffs, u1_coeffs, tol,
                                    max_iter);
    points.emplace_back(T, sol.cost);
  }
  return cost_fit(points, "invT2");
}

}  // namespace obslab
