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
#include <Eigen/Eigenvalues>

#include "obslab/gramian.hpp"
#include "obslab/rng.hpp"
#include "obslab/spectrum.hpp"
#include "obslab/thickset.hpp"
#include "obslab/types.hpp"

using namespace obslab;

namespace {

struct Setup {
  HamiltonianSpectrum spec;
  MaskResult msk;
};

Setup sine_setup(int n, double L = 1.0, double zeta = 0.3) {
  Grid g = make_grid(-10.0, 10.0, n);
  VecXd raw = sample_sine_potential(g, 1.0, 0.0);
  Setup s{diagonalize(g, gauge_shift(raw, auto_gauge_theta(raw))),
          mask(gen_periodic_thickset(L, zeta * L, g, 0.5), g)};
  return s;
}

// int_0^T f(t) dt by composite Simpson on an even number of panels
template <typename F>
auto simpson(F f, double T, int panels) -> decltype(f(0.0)) {
  decltype(f(0.0)) acc = f(0.0) + f(T);
  double dt = T / panels;
  for (int i = 1; i < panels; ++i) {
    acc += f(i * dt) * (i % 2 ? 4.0 : 2.0);
  }
  return acc * (dt / 3.0);
}

double masked_norm2(const HamiltonianSpectrum& spec, const MaskResult& m,
                    const VecXcd& coeffs) {
  VecXcd state = spec.to_state(coeffs);
  double acc = 0.0;
  for (int j : m.nodes) acc += std::norm(state[j]);
  return spec.grid.h * acc;
}

double quad_form(const MatXcd& G, const VecXcd& c) {
  return (c.adjoint() * G * c)(0, 0).real();
}

}  // namespace

TEST_CASE("psi_kernel equals the time integral of the phase factor") {
  for (double T : {0.3, 1.0}) {
    for (double delta : {0.0, 1e-9, 1e-3, 1.0, 50.0, -7.0}) {
      Complex direct = simpson(
          [&](double t) { return std::exp(Complex(0.0, delta * t)); }, T,
          20000);
      Complex got = psi_kernel(delta, T);
      CHECK(std::abs(got - direct) <= 1e-9 * T);
      // conjugate symmetry
      CHECK(std::abs(psi_kernel(-delta, T) - std::conj(got)) <= 1e-15 * T);
    }
  }
}

TEST_CASE("gramian quadratic form equals the observation time integral") {
  Setup s = sine_setup(24);
  const double T = 0.8;
  Gramian G = schrodinger_gramian(s.spec, &s.msk, T);
  CHECK(G.T == T);
  CHECK(G.kind == GramKind::schrodinger);
  CHECK(G.mask_measure == doctest::Approx(s.msk.measure));
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    VecXcd c = rng.cnormal_vec(24);
    double direct = simpson(
        [&](double t) {
          return masked_norm2(s.spec, s.msk,
                              evolve_schrodinger(s.spec.energies, c, t));
        },
        T, 2000);
    CHECK(quad_form(G.matrix, c) ==
          doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("gramian is hermitian positive semidefinite") {
  Setup s = sine_setup(32);
  Gramian G = schrodinger_gramian(s.spec, &s.msk, 0.5);
  double scale = G.matrix.cwiseAbs().maxCoeff();
  CHECK((G.matrix - G.matrix.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  Eigen::SelfAdjointEigenSolver<MatXcd> es(G.matrix);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * scale);
}

TEST_CASE("whole-domain observation gives the exact 1/T law") {
  Setup s = sine_setup(32);
  for (double T : {0.1, 0.5, 1.0, 2.0}) {
    Gramian null_mask = schrodinger_gramian(s.spec, nullptr, T);
    CHECK((null_mask.matrix - T * MatXcd::Identity(32, 32))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    ObsConstant oc = observability_constant(null_mask);
    CHECK(oc.C == doctest::Approx(1.0 / T).epsilon(1e-12));

    // an explicit all-node mask only adds eigensolver-level noise
    MaskResult full = mask(std::vector<Interval>{{-10.0, 10.0}}, s.spec.grid);
    Gramian Gf = schrodinger_gramian(s.spec, &full, T);
    CHECK((Gf.matrix - T * MatXcd::Identity(32, 32)).cwiseAbs().maxCoeff() <=
          1e-10 * T);
  }
}

TEST_CASE("observability constant inverts the smallest eigenvalue") {
  Setup s = sine_setup(28);
  Gramian G = schrodinger_gramian(s.spec, &s.msk, 0.6);
  ObsConstant oc = observability_constant(G);
  CHECK(oc.C * oc.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oc.worst.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quad_form(G.matrix, oc.worst) ==
        doctest::Approx(oc.lambda_min).epsilon(1e-10));
  // no unit vector does better than the reported worst state
  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    VecXcd c = rng.cnormal_vec(28);
    c /= c.norm();
    CHECK(quad_form(G.matrix, c) >= oc.lambda_min * (1.0 - 1e-10));
  }
}

TEST_CASE("a single observed node cannot control many modes") {
  Setup s = sine_setup(24);
  MaskResult one;
  one.nodes = {12};
  one.indicator.assign(24, 0);
  one.indicator[12] = 1;
  one.measure = s.spec.grid.h;
  Gramian G = schrodinger_gramian(s.spec, &one, 0.5);
  CHECK_THROWS_AS(observability_constant(G), NumericalError);
}

TEST_CASE("observation mass grows with the time window and the set") {
  Setup s = sine_setup(24);
  Rng rng(19);
  // a strict subset of the observation set: left halves of each island
  std::vector<Interval> halves;
  ThickSet set = gen_periodic_thickset(1.0, 0.3, s.spec.grid, 0.5);
  for (const auto& iv : set.intervals) {
    halves.push_back({iv.a, iv.a + 0.5 * (iv.b - iv.a)});
  }
  MaskResult sub = mask(halves, s.spec.grid);
  MaskResult full = mask(set, s.spec.grid);
  Gramian G_sub = schrodinger_gramian(s.spec, &sub, 0.5);
  Gramian G_full = schrodinger_gramian(s.spec, &full, 0.5);
  Gramian G_long = schrodinger_gramian(s.spec, &full, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    VecXcd c = rng.cnormal_vec(24);
    double v_sub = quad_form(G_sub.matrix, c);
    double v_full = quad_form(G_full.matrix, c);
    double v_long = quad_form(G_long.matrix, c);
    CHECK(v_sub <= v_full * (1.0 + 1e-12) + 1e-12);
    CHECK(v_full <= v_long * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("observability is invariant under the potential gauge") {
  Grid g = make_grid(-10.0, 10.0, 32);
  VecXd raw = sample_sine_potential(g, 1.0, 0.7);
  double theta = auto_gauge_theta(raw);
  auto spec1 = diagonalize(g, gauge_shift(raw, theta));
  auto spec2 = diagonalize(g, gauge_shift(raw, theta + 2.5));
  MaskResult m = mask(gen_periodic_thickset(1.0, 0.3, g, 0.25), g);
  for (double T : {0.2, 0.7}) {
    ObsConstant a = observability_constant(schrodinger_gramian(spec1, &m, T));
    ObsConstant b = observability_constant(schrodinger_gramian(spec2, &m, T));
    CHECK(std::abs(a.lambda_min - b.lambda_min) <=
          1e-10 * std::max(1.0, a.lambda_min));
  }
}

TEST_CASE("low-mode inequality constant is one on the whole domain") {
  Setup s = sine_setup(32);
  MatXd B_id = MatXd::Identity(32, 32);
  double mu = std::sqrt(s.spec.energies[10]);
  CHECK(spectral_ineq_constant(s.spec, B_id, mu) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // below the ground frequency there is nothing to bound
  CHECK_THROWS_AS(spectral_ineq_constant(s.spec, B_id, 0.5), ConfigError);
}

TEST_CASE("low-mode constant is monotone and hits the rank wall") {
  Setup s = sine_setup(48);
  MatXd B = mask_gram(s.spec, &s.msk);
  double prev = 0.0;
  int nodes = static_cast<int>(s.msk.nodes.size());
  for (int r = 2; r + 4 < nodes; r += 6) {
    double mu = std::sqrt(s.spec.energies[r - 1]);
    double c = spectral_ineq_constant(s.spec, B, mu);
    CHECK(c >= prev * (1.0 - 1e-12));
    CHECK(c >= 1.0 - 1e-12);  // can never beat full observation
    prev = c;
  }
  // more low modes than observed nodes: singular at resolution
  MaskResult thin;
  thin.indicator.assign(48, 0);
  for (int j = 0; j < 10; ++j) {
    thin.nodes.push_back(4 * j);
    thin.indicator[4 * j] = 1;
  }
  thin.measure = 10 * s.spec.grid.h;
  MatXd B_thin = mask_gram(s.spec, &thin);
  double mu_deep = std::sqrt(s.spec.energies[20]);
  CHECK_THROWS_AS(spectral_ineq_constant(s.spec, B_thin, mu_deep),
                  NumericalError);
}

TEST_CASE("heat gramian entries integrate the decaying observation") {
  Setup s = sine_setup(16);
  MatXd B = mask_gram(s.spec, &s.msk);
  const double T = 0.75;
  MatXd Gh = heat_gramian(s.spec.energies, B, T);
  for (int k = 0; k < 16; k += 3) {
    for (int j = 0; j < 16; j += 3) {
      double e = s.spec.energies[k] + s.spec.energies[j];
      double direct =
          B(k, j) * simpson([&](double t) { return std::exp(-e * t); }, T, 4000);
      CHECK(Gh(k, j) == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("partial heat gramians add up over adjacent windows") {
  Setup s = sine_setup(20);
  MatXd B = mask_gram(s.spec, &s.msk);
  MatXd whole = heat_gramian(s.spec.energies, B, 1.0);
  MatXd left = partial_heat_gramian(s.spec.energies, B, 0.0, 0.35);
  MatXd right = partial_heat_gramian(s.spec.energies, B, 0.35, 1.0);
  double scale = whole.cwiseAbs().maxCoeff();
  CHECK((left + right - whole).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("heat constant solver matches the whole-domain closed form") {
  Setup s = sine_setup(48);
  MatXd B_id = MatXd::Identity(48, 48);
  for (double T : {0.3, 1.0, 5.0}) {
    HeatConstant hc = heat_obs_constant(s.spec, B_id, T);
    double closed = heat_obs_constant_full_mask(s.spec.energies, T);
    CHECK(hc.nu == doctest::Approx(closed).epsilon(1e-8));
    CHECK(hc.rank >= 1);
    CHECK(hc.rank <= 48);
    // the reported maximizer achieves the reported value
    double num = 0.0;
    for (int k = 0; k < 48; ++k) {
      num += std::exp(-2.0 * s.spec.energies[k] * T) *
             std::norm(hc.maximizer[k]);
    }
    VecXd xr = hc.maximizer.real();
    double den = xr.dot(heat_gramian(s.spec.energies, B_id, T) * xr);
    CHECK(num / den == doctest::Approx(hc.nu).epsilon(1e-6));
  }
  // very long horizons truncate hopeless modes but keep the answer
  HeatConstant trunc = heat_obs_constant(s.spec, B_id, 20.0);
  CHECK(trunc.rank >= 1);
  CHECK(trunc.rank < 48);
  CHECK(trunc.nu == doctest::Approx(heat_obs_constant_full_mask(
                                        s.spec.energies, 20.0))
                        .epsilon(1e-8));
}

TEST_CASE("interpolation record reproduces its definition on the whole domain") {
  Setup s = sine_setup(24);
  MatXd B_id = MatXd::Identity(24, 24);
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    VecXcd f = rng.cnormal_vec(24);
    double sns = rng.uniform(0.0, 0.3);
    double t = sns + rng.uniform(0.2, 1.0);
    double alpha = rng.uniform(0.2, 0.8);
    InterpRecord rec = interpolation_heat_check(s.spec, B_id, f, sns, t, alpha);
    REQUIRE_FALSE(rec.degenerate);
    double nt = evolve_heat(s.spec.energies, f, t).norm();
    double ns = evolve_heat(s.spec.energies, f, sns).norm();
    // with ||.||_Omega = ||.|| the constant collapses to a two-norm ratio
    double expect = alpha * (std::log(nt) - std::log(ns)) -
                    3.0 / (alpha * (t - sns));
    CHECK(rec.log_C_impl == doctest::Approx(expect).epsilon(1e-10));
    CHECK(rec.log_C_impl < 0.0);  // heat decay makes the ratio small
  }
}

TEST_CASE("telescoped bound dominates the sharp heat constant") {
  // dense enough that every island holds a node and the heat mass of the
  // worst-observed vector stays clear of roundoff on every dyadic slice
  Setup s = sine_setup(96);
  MatXd B = mask_gram(s.spec, &s.msk);
  for (double T : {0.2, 0.5, 1.0}) {
    HeatConstant hc = heat_obs_constant(s.spec, B, T);
    TeleResult tele =
        telescoping_heat_observability(s.spec, B, T, 8, hc.maximizer);
    CHECK(std::isfinite(tele.log_C));
    CHECK(tele.log_C >= std::log(hc.nu) - 1e-10);
    CHECK(tele.log_a.size() == 9);  // depth + 1 dyadic levels
    CHECK(tele.tail <= tele.log_C + 1e-12);
  }
}
