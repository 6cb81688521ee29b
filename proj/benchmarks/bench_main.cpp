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

#include <benchmark/benchmark.h>

#include "obslab/control.hpp"
#include "obslab/fbi.hpp"
#include "obslab/gramian.hpp"
#include "obslab/spectrum.hpp"
#include "obslab/thickset.hpp"

namespace {

using namespace obslab;

HamiltonianSpectrum make_spec(int n) {
  Grid grid = make_grid(-10.0, 10.0, n);
  return diagonalize(grid, gauge_shift(sample_sine_potential(grid, 1.0, 0.0), 1.0));
}

void bm_diagonalize(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Grid grid = make_grid(-10.0, 10.0, n);
  VecXd raw = sample_sine_potential(grid, 1.0, 0.0);
  for (auto _ : state) {
    auto spec = diagonalize(grid, gauge_shift(raw, 1.0));
    benchmark::DoNotOptimize(spec.energies);
  }
}
BENCHMARK(bm_diagonalize)->Arg(64)->Arg(128)->Arg(256);

void bm_gramian_assemble(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto spec = make_spec(n);
  Grid grid = spec.grid;
  auto set = gen_periodic_thickset(1.0, 0.3, grid);
  auto m = mask(set, grid);
  for (auto _ : state) {
    Gramian G = schrodinger_gramian(spec, &m, 0.5);
    benchmark::DoNotOptimize(G.matrix);
  }
}
BENCHMARK(bm_gramian_assemble)->Arg(64)->Arg(128)->Arg(256);

void bm_observability(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto spec = make_spec(n);
  auto set = gen_periodic_thickset(1.0, 0.3, spec.grid);
  auto m = mask(set, spec.grid);
  Gramian G = schrodinger_gramian(spec, &m, 0.5);
  for (auto _ : state) {
    ObsConstant oc = observability_constant(G);
    benchmark::DoNotOptimize(oc.C);
  }
}
BENCHMARK(bm_observability)->Arg(64)->Arg(128)->Arg(256);

void bm_hum_solve(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto spec = make_spec(n);
  auto set = gen_periodic_thickset(1.0, 0.3, spec.grid);
  auto m = mask(set, spec.grid);
  VecXcd u0 = VecXcd::Zero(n);
  for (int k = 0; k < 8; ++k) u0[k] = 1.0;
  u0 /= u0.norm();
  VecXcd u1 = VecXcd::Zero(n);
  for (auto _ : state) {
    ControlSolution sol = hum_solve(spec, m, 0.5, u0, u1, 1e-8, 500);
    benchmark::DoNotOptimize(sol.cost);
  }
}
BENCHMARK(bm_hum_solve)->Arg(64)->Arg(128);

void bm_fbi_residual(benchmark::State& state) {
  auto spec = make_spec(96);
  VecXcd f = VecXcd::Zero(96);
  for (int k = 0; k < 5; ++k) f[k] = 1.0;
  f /= f.norm();
  FbiConfig cfg;
  VecXd tau(2), s(2);
  tau << -3.0, -2.0;
  s << 0.0, 0.25;
  for (auto _ : state) {
    auto rep = intertwine_residual(spec, f, cfg, tau, s, true);
    benchmark::DoNotOptimize(rep.max_rel_residual);
  }
}
BENCHMARK(bm_fbi_residual);

}  // namespace

BENCHMARK_MAIN();
