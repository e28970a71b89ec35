// Copyright 2026 The veil Authors
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
//
// Scanline interval computation. covers_pixel is the canonical coverage
// predicate; the interval code must agree with it pixel-exactly, so interval
// endpoints derived from edge-root divisions are refined against the
// predicate itself (the division can be off by one pixel in the last ulp).

#pragma once

#include <algorithm>
#include <cmath>

#include "veil/setup.hpp"

namespace veil {

// Inclusive pixel interval in x; empty when begin > last.
struct PixelInterval {
  int begin = 0;
  int last = -1;

  bool empty() const { return begin > last; }
  int count() const { return empty() ? 0 : last - begin + 1; }
};

inline bool covers_pixel(const TriangleSetup& t, int px, int py) {
  double x = px + 0.5, y = py + 0.5;
  return t.edges[0].eval(x, y) >= 0.0 && t.edges[1].eval(x, y) >= 0.0 &&
         t.edges[2].eval(x, y) >= 0.0 && t.inv_w.eval(x, y) > 0.0;
}

// Pixels of row `py` within [x_first, x_last] whose centers the triangle
// covers. Constant-time: interval endpoints come from the four affine
// constraints, then each end is nudged at most a pixel against covers_pixel.
inline PixelInterval scanline_row_interval(const TriangleSetup& t, int py, int x_first,
                                           int x_last) {
  PixelInterval out;
  if (!t.valid || py < t.y_min || py > t.y_max) return out;
  double y = py + 0.5;
  double lo = x_first + 0.5;
  double hi = x_last + 0.5;

  const AffineFn* fns[4] = {&t.edges[0], &t.edges[1], &t.edges[2], &t.inv_w};
  for (int i = 0; i < 4; ++i) {
    const AffineFn& f = *fns[i];
    double k = f.b * y + f.c;
    if (f.a == 0.0) {
      bool row_ok = i == 3 ? k > 0.0 : k >= 0.0;
      if (!row_ok) return out;
      continue;
    }
    double root = -k / f.a;
    if (f.a > 0.0) {
      lo = std::max(lo, root);
    } else {
      hi = std::min(hi, root);
    }
  }
  if (!(lo <= hi + 1.0)) return out;

  int begin = std::max(x_first, int(std::ceil(lo - 0.5)));
  int last = std::min(x_last, int(std::floor(hi - 0.5)));

  // Refine against the canonical predicate.
  while (begin <= last && !covers_pixel(t, begin, py)) ++begin;
  while (begin > x_first && covers_pixel(t, begin - 1, py)) --begin;
  while (last >= begin && !covers_pixel(t, last, py)) --last;
  while (last < x_last && last >= begin && covers_pixel(t, last + 1, py)) ++last;

  if (begin > last) return out;
  out.begin = begin;
  out.last = last;
  return out;
}

}  // namespace veil
