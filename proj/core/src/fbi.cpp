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

#include "obslab/fbi.hpp"

#include <algorithm>
#include <cmath>

namespace obslab {

namespace {

double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep5_d(double u) {
  double v = u * (1.0 - u);
  return 30.0 * v * v;
}

double fbi_prefactor(double h) {
  return std::pow(2.0, 0.25) * std::pow(2.0 * M_PI * h, -0.75);
}

Complex gauss_kernel(Complex z, double t, double h) {
  Complex w = z + t;
  return std::exp(-w * w / (2.0 * h));
}

}  // namespace

double FbiConfig::dt_or_default() const {
  return dt > 0.0 ? dt : std::sqrt(h) / 20.0;
}

double chi(double t, double T) {
  if (t <= 0.0 || t >= 10.0 * T) return 0.0;
  if (t < 2.0 * T) return smoothstep5(t / (2.0 * T));
  if (t <= 8.0 * T) return 1.0;
  return smoothstep5((10.0 * T - t) / (2.0 * T));
}

double chi_prime(double t, double T) {
  if (t <= 0.0 || t >= 10.0 * T) return 0.0;
  if (t < 2.0 * T) return smoothstep5_d(t / (2.0 * T)) / (2.0 * T);
  if (t <= 8.0 * T) return 0.0;
  return -smoothstep5_d((10.0 * T - t) / (2.0 * T)) / (2.0 * T);
}

VecXcd fbi_transform(const std::vector<VecXcd>& gamma, const VecXd& t_grid,
                     double h, Complex z, bool* truncated) {
  if (!(h > 0.0)) throw ConfigError("fbi_transform: h must be positive");
  if (gamma.size() < 2 || static_cast<int>(gamma.size()) != t_grid.size())
    throw ConfigError("fbi_transform: sample and grid sizes disagree");
  int N = t_grid.size();
  double tc = -z.real();
  double W = 8.0 * std::sqrt(h) + std::abs(z.imag());
  if (truncated) {
    bool left_cut = t_grid[0] > tc - W && gamma.front().norm() > 0.0;
    bool right_cut = t_grid[N - 1] < tc + W && gamma.back().norm() > 0.0;
    *truncated = left_cut || right_cut;
  }
  int lo = 0;
  while (lo < N && t_grid[lo] < tc - W) ++lo;
  int hi = N - 1;
  while (hi >= 0 && t_grid[hi] > tc + W) --hi;
  VecXcd sum = VecXcd::Zero(gamma[0].size());
  if (lo > hi) return sum;
  for (int j = lo; j <= hi; ++j) {
    double wl = j > lo ? 0.5 * (t_grid[j] - t_grid[j - 1]) : 0.0;
    double wr = j < hi ? 0.5 * (t_grid[j + 1] - t_grid[j]) : 0.0;
    sum += (wl + wr) * gauss_kernel(z, t_grid[j], h) * gamma[j];
  }
  return fbi_prefactor(h) * sum;
}

VecXcd fbi_of_flow(const HamiltonianSpectrum& spec, const VecXcd& f_coeffs,
                   const FbiConfig& cfg,
                   const std::function<double(double)>& weight, Complex z) {
  if (!(cfg.h > 0.0)) throw ConfigError("fbi_of_flow: h must be positive");
  if (f_coeffs.size() != spec.n())
    throw ConfigError("fbi_of_flow: coefficient size mismatch");
  int n = spec.n();
  double tc = -z.real();
  double W = 8.0 * std::sqrt(cfg.h) + std::abs(z.imag());
  double lo = std::max(0.0, tc - W);
  double hi = std::min(10.0 * cfg.T, tc + W);
  VecXcd out = VecXcd::Zero(n);
  if (hi <= lo) return out;
  double step = cfg.dt_or_default();
  int segs = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  double dt = (hi - lo) / segs;
  for (int j = 0; j <= segs; ++j) {
    double t = lo + j * dt;
    double w = (j == 0 || j == segs) ? 0.5 * dt : dt;
    Complex kw = w * weight(t) * gauss_kernel(z, t, cfg.h);
    if (kw == Complex(0.0, 0.0)) continue;
    for (int k = 0; k < n; ++k)
      out[k] += kw * std::polar(1.0, spec.energies[k] * t);
  }
  return fbi_prefactor(cfg.h) * out.cwiseProduct(f_coeffs);
}

IntertwineReport intertwine_residual(const HamiltonianSpectrum& spec,
                                     const VecXcd& f_coeffs,
                                     const FbiConfig& cfg,
                                     const VecXd& tau_grid,
                                     const VecXd& s_grid, bool mask_free,
                                     const MaskResult* m) {
  if (tau_grid.size() == 0 || s_grid.size() == 0)
    throw ConfigError("intertwine_residual: empty evaluation grid");
  if (!(cfg.ds > 0.0)) throw ConfigError("intertwine_residual: ds must be positive");
  if (!mask_free && m == nullptr)
    throw ConfigError("intertwine_residual: masked variant needs a mask");

  int n = spec.n();
  // sampled path for the masked variant; the free variant is diagonal and
  // integrates per mode instead
  std::vector<VecXcd> chi_path, chip_path;
  VecXd t_grid;
  if (!mask_free) {
    double step = cfg.dt_or_default();
    int segs = std::max(1, static_cast<int>(std::ceil(10.0 * cfg.T / step)));
    t_grid.resize(segs + 1);
    chi_path.resize(segs + 1);
    chip_path.resize(segs + 1);
    for (int j = 0; j <= segs; ++j) {
      double t = 10.0 * cfg.T * j / segs;
      t_grid[j] = t;
      VecXcd state =
          spec.to_state(evolve_schrodinger(spec.energies, f_coeffs, t));
      for (int g = 0; g < n; ++g)
        if (!m->indicator[g]) state[g] = 0.0;
      VecXcd coeffs = spec.to_coeffs(state);
      chi_path[j] = chi(t, cfg.T) * coeffs;
      chip_path[j] = chi_prime(t, cfg.T) * coeffs;
    }
  }

  auto transform = [&](const std::function<double(double)>& w, bool prime,
                       Complex z) {
    if (mask_free) return fbi_of_flow(spec, f_coeffs, cfg, w, z);
    return fbi_transform(prime ? chip_path : chi_path, t_grid, cfg.h, z);
  };
  auto wchi = [&](double t) { return chi(t, cfg.T); };
  auto wchip = [&](double t) { return chi_prime(t, cfg.T); };

  IntertwineReport rep;
  const Complex i(0.0, 1.0);
  for (int it = 0; it < tau_grid.size(); ++it) {
    for (int is = 0; is < s_grid.size(); ++is) {
      double tau = tau_grid[it], s = s_grid[is];
      Complex z(tau, s);
      VecXcd w0 = transform(wchi, false, z);
      VecXcd wp = transform(wchi, false, Complex(tau, s + cfg.ds));
      VecXcd wm = transform(wchi, false, Complex(tau, s - cfg.ds));
      VecXcd wprime = transform(wchip, true, z);
      VecXcd lhs = (wp - wm) / (2.0 * cfg.ds) -
                   spec.energies.cast<Complex>().cwiseProduct(w0);
      VecXcd rhs = -i * wprime;
      IntertwineReport::Row row;
      row.tau = tau;
      row.s = s;
      row.lhs_norm = lhs.norm();
      row.rhs_norm = rhs.norm();
      row.residual = (lhs - rhs).norm();
      rep.rows.push_back(row);
      rep.w_scale = std::max(rep.w_scale, w0.norm());
    }
  }
  if (!(rep.w_scale > 0.0))
    throw NumericalError("intertwine_residual: transform vanished on the grid");
  for (const auto& row : rep.rows)
    rep.max_rel_residual =
        std::max(rep.max_rel_residual, row.residual / rep.w_scale);
  return rep;
}

ReproduceRecord gaussian_reproduce_check(const HamiltonianSpectrum& spec,
                                         const VecXcd& f_coeffs, double h,
                                         double T, double tau) {
  if (!(h > 0.0 && T > 0.0))
    throw ConfigError("gaussian_reproduce_check: h and T must be positive");
  if (tau < 4.0 * T || tau > 6.0 * T)
    throw ConfigError(
        "gaussian_reproduce_check: tau must sit in the plateau [4T, 6T]");
  if (f_coeffs.size() != spec.n())
    throw ConfigError("gaussian_reproduce_check: coefficient size mismatch");
  int n = spec.n();
  double W = 8.0 * std::sqrt(h);
  double lo = std::max(0.0, tau - W);
  double hi = std::min(10.0 * T, tau + W);
  double step = std::sqrt(h) / 20.0;
  int segs = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  double dt = (hi - lo) / segs;
  double norm = 1.0 / std::sqrt(2.0 * M_PI * h);
  VecXcd r(n);
  for (int k = 0; k < n; ++k) r[k] = std::polar(1.0, spec.energies[k] * tau);
  for (int j = 0; j <= segs; ++j) {
    double t = lo + j * dt;
    double w = (j == 0 || j == segs) ? 0.5 * dt : dt;
    double g = w * norm * chi(t, T) *
               std::exp(-(tau - t) * (tau - t) / (2.0 * h));
    if (g == 0.0) continue;
    for (int k = 0; k < n; ++k)
      r[k] -= g * std::polar(1.0, spec.energies[k] * t);
  }
  ReproduceRecord rec;
  rec.f_norm = f_coeffs.norm();
  rec.Hf_norm =
      spec.energies.cast<Complex>().cwiseProduct(f_coeffs).norm();
  rec.error = r.cwiseProduct(f_coeffs).norm();
  rec.bound = 2.0 * std::exp(-18.0 * T * T / h) * rec.f_norm +
              std::sqrt(32.0 * h / M_PI) * std::sqrt(1.0 + 1.0 / (T * T)) *
                  rec.Hf_norm;
  return rec;
}

BarrierSolution solve_barrier(const std::function<double(double)>& V, double a,
                              double b, double step) {
  if (!(a < b)) throw ConfigError("solve_barrier: need a < b");
  if (!(step > 0.0)) throw ConfigError("solve_barrier: step must be positive");
  int segs = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
  double hh = (b - a) / segs;
  BarrierSolution sol;
  sol.a = a;
  sol.b = b;
  sol.step = hh;
  sol.phi.resize(segs + 1);
  sol.dphi.resize(segs + 1);
  sol.phi[0] = 1.0;
  sol.dphi[0] = 0.0;
  double v_max = V(a);
  auto rhs = [&](double x, double p, double dp, double* out_dp,
                 double* out_ddp) {
    double v = V(x);
    v_max = std::max(v_max, v);
    *out_dp = dp;
    *out_ddp = v * p;
  };
  for (int j = 0; j < segs; ++j) {
    double x = a + j * hh;
    double p = sol.phi[j], dp = sol.dphi[j];
    double k1p, k1d, k2p, k2d, k3p, k3d, k4p, k4d;
    rhs(x, p, dp, &k1p, &k1d);
    rhs(x + 0.5 * hh, p + 0.5 * hh * k1p, dp + 0.5 * hh * k1d, &k2p, &k2d);
    rhs(x + 0.5 * hh, p + 0.5 * hh * k2p, dp + 0.5 * hh * k2d, &k3p, &k3d);
    rhs(x + hh, p + hh * k3p, dp + hh * k3d, &k4p, &k4d);
    sol.phi[j + 1] = p + hh / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    sol.dphi[j + 1] = dp + hh / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
  }
  sol.upper_bound = std::exp((b - a) * (b - a) * v_max);
  return sol;
}

}  // namespace obslab
