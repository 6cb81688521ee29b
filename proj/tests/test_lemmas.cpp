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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "obslab/lemmas.hpp"
#include "obslab/rng.hpp"
#include "obslab/types.hpp"

using namespace obslab;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  double acc = f(a) + f(b);
  double dx = (b - a) / panels;
  for (int i = 1; i < panels; ++i) {
    acc += f(a + i * dx) * (i % 2 ? 4.0 : 2.0);
  }
  return acc * (dx / 3.0);
}

std::vector<Interval> random_islands(Rng& rng, int count) {
  std::vector<double> cuts(2 * count);
  for (auto& c : cuts) c = rng.uniform(0.0, 1.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Interval> iv;
  for (int i = 0; i < count; ++i) {
    if (cuts[2 * i + 1] - cuts[2 * i] > 1e-3) {
      iv.push_back({cuts[2 * i], cuts[2 * i + 1]});
    }
  }
  if (iv.empty()) iv.push_back({0.2, 0.6});
  return iv;
}

}  // namespace

TEST_CASE("squared-cosine mass closed form equals direct quadrature") {
  Rng rng(33);
  for (double lambda : {1.0, 8.0, 37.5, 100.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      auto iv = random_islands(rng, 3);
      double x0 = rng.uniform(-1.0, 1.0);
      // panel count sized so the quadrature beats the comparison tolerance
      // even at lambda = 100 (error ~ (2 lambda)^4 h^4)
      double direct = 0.0;
      for (const auto& s : iv) {
        direct += simpson(
            [&](double x) {
              double c = std::cos(lambda * (x - x0));
              return c * c;
            },
            s.a, s.b, 20000);
      }
      CHECK(cos2_integral(iv, lambda, x0) ==
            doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("full unit window at the resonant frequency gives exactly half") {
  std::vector<Interval> unit = {{0.0, 1.0}};
  CHECK(cos2_inf_closed(unit, M_PI) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cos2_inf(unit, M_PI) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("searched infimum meets the phasor-sum closed form from above") {
  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    auto iv = random_islands(rng, 1 + trial % 3);
    double lambda = std::exp(rng.uniform(0.0, std::log(100.0)));
    double closed = cos2_inf_closed(iv, lambda);
    double searched = cos2_inf(iv, lambda);
    CHECK(searched >= closed - 1e-12);
    CHECK(searched - closed <= 1e-9);
    CHECK(closed >= 0.0);
  }
}

TEST_CASE("single-interval infimum reduces to the textbook expression") {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    double a = rng.uniform(0.0, 0.5);
    double len = rng.uniform(0.05, 0.5);
    double lambda = rng.uniform(1.0, 60.0);
    std::vector<Interval> iv = {{a, a + len}};
    double expect =
        len / 2.0 - std::abs(std::sin(lambda * len)) / (2.0 * lambda);
    CHECK(cos2_inf_closed(iv, lambda) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("test family derivatives are consistent") {
  GaussPolyTestFn fn;
  fn.q = 0.8;
  fn.c = 0.3;
  fn.p0 = 1.0;
  fn.p1 = -0.4;
  fn.p2 = 0.25;
  for (double x = -2.0; x <= 2.0; x += 0.17) {
    double fd1 = (fn.f(x + 1e-5) - fn.f(x - 1e-5)) / 2e-5;
    double fd2 = (fn.f(x + 1e-4) - 2.0 * fn.f(x) + fn.f(x - 1e-4)) / 1e-8;
    CHECK(fn.df(x) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(fn.d2f(x) == doctest::Approx(fd2).epsilon(1e-4));
  }
}

TEST_CASE("variation-of-constants identity holds for the smooth family") {
  GaussPolyTestFn fn;
  fn.q = 1.0;
  fn.p0 = 1.0;
  fn.p1 = 0.5;
  fn.p2 = 0.25;
  double residual = solution_representation_check(fn, 4.0, 0.0, -2.0, 2.0);
  CHECK(residual <= 1e-6);

  GaussPolyTestFn other;
  other.q = 0.6;
  other.c = 0.4;
  other.p0 = 0.7;
  other.p2 = -0.3;
  double r2 = solution_representation_check(other, 9.5, -0.3, -2.5, 1.5);
  CHECK(r2 <= 1e-6);
}
