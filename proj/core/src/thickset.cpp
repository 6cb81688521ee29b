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

#include "obslab/thickset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "obslab/rng.hpp"

namespace obslab {

Grid make_grid(double x_min, double x_max, int n) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || x_min >= x_max)
    throw ConfigError("make_grid: bounds must be finite with x_min < x_max");
  if (n < 16) throw ConfigError("make_grid: need at least 16 interior nodes");
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.h = (x_max - x_min) / (n + 1);
  return g;
}

double norm_h(const Grid& grid, const VecXcd& u) {
  return std::sqrt(grid.h) * u.norm();
}

std::vector<Interval> normalize_intervals(std::vector<Interval> intervals,
                                          double x_min, double x_max) {
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || iv.a >= iv.b) {
      std::ostringstream os;
      os << "interval [" << iv.a << ", " << iv.b << "] is empty or not finite";
      throw ConfigError(os.str());
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& u, const Interval& v) { return u.a < v.a; });
  std::vector<Interval> out;
  for (auto iv : intervals) {
    iv.a = std::max(iv.a, x_min);
    iv.b = std::min(iv.b, x_max);
    if (iv.b - iv.a <= 0.0) continue;
    if (!out.empty() && iv.a < out.back().b) {
      std::ostringstream os;
      os << "intervals overlap near x = " << iv.a;
      throw ConfigError(os.str());
    }
    if (!out.empty() && iv.a == out.back().b) {
      out.back().b = iv.b;  // touching intervals merge
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

double set_measure(const std::vector<Interval>& intervals) {
  double m = 0.0;
  for (const auto& iv : intervals) m += iv.length();
  return m;
}

double window_overlap(const std::vector<Interval>& intervals, double x,
                      double L) {
  double m = 0.0;
  for (const auto& iv : intervals) {
    double lo = std::max(iv.a, x);
    double hi = std::min(iv.b, x + L);
    if (hi > lo) m += hi - lo;
  }
  return m;
}

ThickCheckResult check_thick(const std::vector<Interval>& intervals, double L,
                             double zeta, const Grid& grid) {
  if (!(zeta > 0.0 && zeta < 1.0))
    throw ConfigError("check_thick: zeta must lie in (0, 1)");
  if (!(L > 0.0 && L <= grid.x_max - grid.x_min))
    throw ConfigError("check_thick: window length must fit inside the box");
  auto sorted = normalize_intervals(intervals, grid.x_min, grid.x_max);

  double x_lo = grid.x_min;
  double x_hi = grid.x_max - L;
  std::vector<double> candidates = {x_lo, x_hi};
  for (const auto& iv : sorted) {
    for (double c : {iv.a, iv.b, iv.a - L, iv.b - L}) {
      if (c > x_lo && c < x_hi) candidates.push_back(c);
    }
  }

  ThickCheckResult res;
  res.margin = std::numeric_limits<double>::infinity();
  for (double x : candidates) {
    double slack = window_overlap(sorted, x, L) - zeta * L;
    if (slack < res.margin) {
      res.margin = slack;
      res.worst_x = x;
    }
  }
  res.thick = res.margin >= -1e-12;
  return res;
}

ThickSet make_thickset(std::vector<Interval> intervals, double L, double zeta,
                       const Grid& grid) {
  auto sorted = normalize_intervals(std::move(intervals), grid.x_min, grid.x_max);
  auto res = check_thick(sorted, L, zeta, grid);
  if (!res.thick) {
    std::ostringstream os;
    os << "set is not (" << L << ", " << zeta << ")-thick: window ["
       << res.worst_x << ", " << res.worst_x + L << "] holds measure "
       << window_overlap(sorted, res.worst_x, L) << " < " << zeta * L;
    throw ConfigError(os.str());
  }
  ThickSet set;
  set.intervals = std::move(sorted);
  set.L = L;
  set.zeta = zeta;
  set.margin = res.margin;
  return set;
}

ThickSet gen_periodic_thickset(double period, double fill, const Grid& grid,
                               double offset_frac) {
  if (!(fill > 0.0 && fill < period))
    throw ConfigError("gen_periodic_thickset: need 0 < fill < period");
  if (offset_frac < 0.0 || offset_frac > 1.0 - fill / period)
    throw ConfigError(
        "gen_periodic_thickset: offset must keep each island in its cell");
  std::vector<Interval> iv;
  double off = offset_frac * period;
  for (double k = grid.x_min; k < grid.x_max - 1e-12; k += period) {
    double a = k + off;
    double b = std::min(a + fill, grid.x_max);
    if (b - a > 1e-12) iv.push_back({a, b});
  }
  return make_thickset(std::move(iv), period, fill / period, grid);
}

ThickSet gen_random_thickset(double L, double zeta, uint64_t seed,
                             const Grid& grid) {
  if (!(zeta > 0.0 && zeta < 1.0))
    throw ConfigError("gen_random_thickset: zeta must lie in (0, 1)");
  Rng rng(seed);
  double offset_frac = rng.uniform(0.0, 1.0 - zeta);
  std::vector<Interval> iv;
  double off = offset_frac * L;
  for (double k = grid.x_min; k < grid.x_max - 1e-12; k += L) {
    double a = k + off;
    double b = std::min(a + zeta * L, grid.x_max);
    if (b - a > 1e-12) iv.push_back({a, b});
  }
  // optional extra mass: up to three additional islands in the gaps
  int extras = rng.uniform_int(0, 3);
  for (int e = 0; e < extras; ++e) {
    double len = rng.uniform(0.1, 0.4) * L;
    double a = rng.uniform(grid.x_min, grid.x_max - len);
    double b = a + len;
    bool clash = false;
    for (const auto& existing : iv)
      if (a < existing.b && existing.a < b) clash = true;
    if (!clash) iv.push_back({a, b});
  }
  return make_thickset(std::move(iv), L, zeta, grid);
}

MaskResult mask(const std::vector<Interval>& intervals, const Grid& grid) {
  auto sorted = normalize_intervals(intervals, grid.x_min, grid.x_max);
  MaskResult res;
  res.indicator.assign(grid.n, 0);
  for (int j = 0; j < grid.n; ++j) {
    double x = grid.node(j);
    for (const auto& iv : sorted) {
      if (x >= iv.a && x <= iv.b) {
        res.indicator[j] = 1;
        res.nodes.push_back(j);
        break;
      }
    }
  }
  for (const auto& iv : sorted) {
    bool hit = false;
    for (int j : res.nodes) {
      double x = grid.node(j);
      if (x >= iv.a && x <= iv.b) {
        hit = true;
        break;
      }
    }
    if (!hit) res.degenerate_warning = true;  // interval below grid resolution
  }
  res.measure = grid.h * static_cast<double>(res.nodes.size());
  return res;
}

MaskResult mask(const ThickSet& set, const Grid& grid) {
  return mask(set.intervals, grid);
}

double hausdorff_content_1(const std::vector<Interval>& intervals) {
  return 0.5 * set_measure(intervals);
}

}  // namespace obslab
