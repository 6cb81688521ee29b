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
#include <vector>

#include "obslab/types.hpp"

namespace obslab {

// Sorts, validates (throws ConfigError on overlap or reversed endpoints),
// merges touching intervals, and clips to [x_min, x_max].
std::vector<Interval> normalize_intervals(std::vector<Interval> intervals,
                                          double x_min, double x_max);

double set_measure(const std::vector<Interval>& intervals);

// Lebesgue measure of (union intervals) intersected with [x, x+L].
double window_overlap(const std::vector<Interval>& intervals, double x, double L);

struct ThickCheckResult {
  bool thick = false;
  double margin = 0.0;   // min over windows of (overlap - zeta*L)
  double worst_x = 0.0;  // left endpoint of the minimizing window
};

// Exact thickness check. The window overlap is piecewise linear in the window
// position, so its minimum over [x_min, x_max - L] is attained where the
// window boundary crosses an interval endpoint; only those finitely many
// candidates (plus the domain ends) are evaluated. No sampling.
ThickCheckResult check_thick(const std::vector<Interval>& intervals, double L,
                             double zeta, const Grid& grid);

// check_thick + certificate packaging; throws ConfigError naming the worst
// window when the set is not (L, zeta)-thick.
ThickSet make_thickset(std::vector<Interval> intervals, double L, double zeta,
                       const Grid& grid);

// Periodic island pattern: [k*period + offset_frac*period, ... + fill] for
// every period cell intersecting the box. (period, fill/period)-thick by
// construction for offset_frac in [0, 1 - fill/period].
ThickSet gen_periodic_thickset(double period, double fill, const Grid& grid,
                               double offset_frac = 0.0);

// One uniformly drawn global offset for the periodic pattern plus a few
// extra random islands. A single global offset keeps every window's mass at
// zeta*L exactly (independent per-window offsets can starve a window that
// straddles two cells), so margin >= 0 holds for every seed.
ThickSet gen_random_thickset(double L, double zeta, uint64_t seed,
                             const Grid& grid);

struct MaskResult {
  std::vector<int> nodes;           // indices of grid nodes inside the set
  std::vector<uint8_t> indicator;   // size n, 1 iff node in set
  double measure = 0.0;             // h * node count
  bool degenerate_warning = false;  // an interval contained no node
};

MaskResult mask(const std::vector<Interval>& intervals, const Grid& grid);
MaskResult mask(const ThickSet& set, const Grid& grid);

// For finite unions of segments on a line the 1-content is half the measure.
double hausdorff_content_1(const std::vector<Interval>& intervals);

}  // namespace obslab
