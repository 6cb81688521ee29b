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

#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "obslab/fbi.hpp"
#include "obslab/rng.hpp"
#include "obslab/spectrum.hpp"
#include "obslab/thickset.hpp"
#include "obslab/types.hpp"

using namespace obslab;

namespace {

HamiltonianSpectrum flat_spec(int n) {
  Grid g = make_grid(-10.0, 10.0, n);
  return diagonalize(g, gauge_shift(sample_constant_potential(g, 1.0), 0.0));
}

VecXcd low_mode_draw(Rng& rng, int n, int modes) {
  VecXcd f = VecXcd::Zero(n);
  for (int k = 0; k < modes; ++k) f[k] = rng.cnormal();
  f /= f.norm();
  return f;
}

}  // namespace

TEST_CASE("cutoff is a symmetric C1 plateau with bounded slope") {
  const double T = 0.5;
  CHECK(chi(-0.1, T) == 0.0);
  CHECK(chi(0.0, T) == 0.0);
  CHECK(chi(2.0 * T, T) == 1.0);
  CHECK(chi(5.0 * T, T) == 1.0);
  CHECK(chi(8.0 * T, T) == 1.0);
  CHECK(chi(10.0 * T, T) == 0.0);
  CHECK(chi(11.0 * T, T) == 0.0);
  for (double t = -0.2; t <= 5.3; t += 0.037) {
    double c = chi(t, T);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    // mirror symmetry about 5T
    CHECK(chi(10.0 * T - t, T) == doctest::Approx(c).epsilon(1e-14));
    // chi' is the derivative and respects the slope cap
    double fd = (chi(t + 5e-7, T) - chi(t - 5e-7, T)) / 1e-6;
    CHECK(std::abs(chi_prime(t, T) - fd) <= 1e-6);
    CHECK(std::abs(chi_prime(t, T)) <= 2.0 / T);
  }
}

TEST_CASE("transform of a pure phase matches the gaussian closed form") {
  const double h = 0.1;
  const double E = 2.0;
  for (Complex z : {Complex(-2.5, 0.0), Complex(-2.5, 0.2), Complex(-1.8, 0.35)}) {
    // sample the phase on a grid generously covering the kernel window
    double center = -z.real();
    double half = 8.0 * std::sqrt(h) + std::abs(z.imag()) + 0.3;
    int steps = static_cast<int>(2.0 * half / 5e-4);
    VecXd t_grid(steps + 1);
    std::vector<VecXcd> gamma(steps + 1, VecXcd(1));
    for (int i = 0; i <= steps; ++i) {
      double t = center - half + 2.0 * half * i / steps;
      t_grid[i] = t;
      gamma[i][0] = std::exp(Complex(0.0, E * t));
    }
    bool truncated = true;
    VecXcd W = fbi_transform(gamma, t_grid, h, z, &truncated);
    CHECK_FALSE(truncated);
    Complex expect = std::pow(2.0, 0.25) * std::pow(2.0 * M_PI * h, -0.25) *
                     std::exp(Complex(0.0, -1.0) * E * z) *
                     std::exp(-E * E * h / 2.0);
    CHECK(std::abs(W[0] - expect) <= 1e-6 * std::abs(expect));
  }
}

TEST_CASE("transform flags a grid that cuts the kernel support") {
  const double h = 0.1;
  Complex z(-2.5, 0.0);  // kernel lives near t = 2.5, width about 2.5
  int steps = 200;
  VecXd t_grid(steps + 1);
  std::vector<VecXcd> gamma(steps + 1, VecXcd(1));
  for (int i = 0; i <= steps; ++i) {
    double t = 2.0 + i * (1.0 / steps);  // [2, 3] stops inside the window
    t_grid[i] = t;
    gamma[i][0] = 1.0;
  }
  bool truncated = false;
  fbi_transform(gamma, t_grid, h, z, &truncated);
  CHECK(truncated);
}

TEST_CASE("flow transform agrees with the generic path transform") {
  auto spec = flat_spec(48);
  Rng rng(15);
  VecXcd f = low_mode_draw(rng, 48, 5);
  FbiConfig cfg;
  cfg.h = 0.1;
  cfg.T = 0.5;
  const double horizon = 10.0 * cfg.T;
  const int steps = 20000;
  VecXd t_grid(steps + 1);
  std::vector<VecXcd> gamma(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    double t = horizon * i / steps;
    t_grid[i] = t;
    gamma[i] =
        chi(t, cfg.T) * evolve_schrodinger(spec.energies, f, t);
  }
  auto weight = [&](double t) { return chi(t, cfg.T); };
  for (Complex z : {Complex(-2.5, 0.0), Complex(-2.2, 0.15)}) {
    VecXcd via_path = fbi_transform(gamma, t_grid, cfg.h, z);
    VecXcd via_flow = fbi_of_flow(spec, f, cfg, weight, z);
    CHECK((via_path - via_flow).norm() <= 1e-5 * via_path.norm());
  }
}

TEST_CASE("intertwining residual is small and second order in the s-step") {
  auto spec = flat_spec(96);
  VecXcd f = VecXcd::Zero(96);
  for (int k = 0; k < 5; ++k) f[k] = 1.0 / std::sqrt(5.0);
  FbiConfig cfg;
  cfg.h = 0.1;
  cfg.T = 0.5;
  cfg.ds = 1e-3;
  VecXd tau(3), sgrid(3);
  tau << -3.0, -2.5, -2.0;
  sgrid << 0.0, 0.125, 0.25;
  IntertwineReport rep = intertwine_residual(spec, f, cfg, tau, sgrid, true);
  CHECK(rep.max_rel_residual <= 1e-6);
  CHECK(rep.w_scale > 0.0);
  CHECK(rep.rows.size() == 9);
  for (const auto& row : rep.rows) {
    // rows carry absolute residuals; the headline number divides by w_scale
    CHECK(row.residual / rep.w_scale <= rep.max_rel_residual + 1e-18);
  }

  FbiConfig half = cfg;
  half.ds = cfg.ds / 2.0;
  IntertwineReport rep2 = intertwine_residual(spec, f, cfg, tau, sgrid, true);
  IntertwineReport fine = intertwine_residual(spec, f, half, tau, sgrid, true);
  CHECK(rep2.max_rel_residual == rep.max_rel_residual);  // deterministic
  double ratio = rep.max_rel_residual / fine.max_rel_residual;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("masked whole-domain observation reproduces the free residual scale") {
  auto spec = flat_spec(64);
  VecXcd f = VecXcd::Zero(64);
  for (int k = 0; k < 4; ++k) f[k] = 0.5;
  FbiConfig cfg;
  cfg.h = 0.1;
  cfg.T = 0.5;
  MaskResult full = mask(std::vector<Interval>{{-10.0, 10.0}}, spec.grid);
  VecXd tau(2), sgrid(2);
  tau << -2.8, -2.2;
  sgrid << 0.0, 0.2;
  IntertwineReport rep =
      intertwine_residual(spec, f, cfg, tau, sgrid, false, &full);
  CHECK(rep.max_rel_residual <= 5e-6);
}

TEST_CASE("gaussian reproduction error matches the per-mode closed form") {
  auto spec = flat_spec(96);
  Rng rng(28);
  VecXcd f = low_mode_draw(rng, 96, 5);
  const double h = 0.05;
  const double T = 1.0;
  const double tau = 5.0;  // kernel support sits inside the cutoff plateau
  ReproduceRecord rec = gaussian_reproduce_check(spec, f, h, T, tau);

  double expect_sq = 0.0;
  double hf_sq = 0.0;
  for (int k = 0; k < 96; ++k) {
    double E = spec.energies[k];
    double defect = 1.0 - std::exp(-E * E * h / 2.0);
    expect_sq += std::norm(f[k]) * defect * defect;
    hf_sq += std::norm(f[k]) * E * E;
  }
  CHECK(rec.error == doctest::Approx(std::sqrt(expect_sq)).epsilon(1e-5));
  CHECK(rec.f_norm == doctest::Approx(f.norm()).epsilon(1e-12));
  CHECK(rec.Hf_norm == doctest::Approx(std::sqrt(hf_sq)).epsilon(1e-12));
  CHECK(rec.error <= rec.bound);
  // the stated bound formula is what is reported
  double bound = 2.0 * std::exp(-18.0 * T * T / h) * rec.f_norm +
                 std::sqrt(32.0 * h / M_PI) * std::sqrt(1.0 + 1.0 / (T * T)) *
                     rec.Hf_norm;
  CHECK(rec.bound == doctest::Approx(bound).epsilon(1e-12));
  // the center must sit on the plateau
  CHECK_THROWS_AS(gaussian_reproduce_check(spec, f, h, T, 3.0), ConfigError);
  CHECK_THROWS_AS(gaussian_reproduce_check(spec, f, h, T, 6.5), ConfigError);
}

TEST_CASE("unit potential barrier is the hyperbolic cosine") {
  auto sol = solve_barrier([](double) { return 1.0; }, 0.0, 1.5, 1e-3);
  CHECK(sol.upper_bound == doctest::Approx(std::exp(1.5 * 1.5)));
  int m = static_cast<int>(sol.phi.size());
  for (int i = 0; i < m; i += 50) {
    double x = sol.a + i * sol.step;
    CHECK(std::abs(sol.phi[i] - std::cosh(x)) <= 1e-9);
    CHECK(std::abs(sol.dphi[i] - std::sinh(x)) <= 1e-9);
  }
  // discrete convexity: second difference curves at least like phi itself
  for (int i = 1; i + 1 < m; i += 97) {
    double second =
        (sol.phi[i + 1] - 2.0 * sol.phi[i] + sol.phi[i - 1]) / (sol.step * sol.step);
    CHECK(second >= sol.phi[i] * (1.0 - 1e-5));
  }
}

TEST_CASE("random admissible potentials keep the barrier pinched and monotone") {
  Rng rng(64);
  for (int trial = 0; trial < 10; ++trial) {
    // smooth draw with values in [1, 5]
    double a0 = rng.uniform(0.0, 2.0);
    double a1 = rng.uniform(0.0, 2.0 - a0);
    double p0 = rng.uniform(0.0, 2.0 * M_PI);
    double p1 = rng.uniform(0.0, 2.0 * M_PI);
    auto V = [=](double x) {
      return 3.0 + a0 * std::cos(x + p0) + a1 * std::cos(3.0 * x + p1);
    };
    auto sol = solve_barrier(V, 0.0, 2.0, 1e-3);
    CHECK(sol.upper_bound <= std::exp(4.0 * 5.0) * (1.0 + 1e-12));
    double prev = 0.0;
    int len = static_cast<int>(sol.phi.size());
    for (int i = 0; i < len; ++i) {
      CHECK(sol.phi[i] >= 1.0 - 1e-12);
      CHECK(sol.phi[i] <= sol.upper_bound * (1.0 + 1e-12));
      CHECK(sol.phi[i] >= prev - 1e-14);
      prev = sol.phi[i];
    }
  }
}
