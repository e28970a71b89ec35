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
// Binning stage: build, for every 32x32-pixel bin, the list of overlapping
// primitives, and categorize bins by triangle density. Small quads are
// binned by their bin-resolution AABB (conservative); large quads are
// expanded into triangles and binned by exact scanline coverage.

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "veil/scanline.hpp"
#include "veil/setup.hpp"

namespace veil {

enum class BinCategory : uint8_t { empty = 0, low = 1, high = 2 };

// Bins with fewer than 1024 triangle-equivalents are low; quads count as 2.
constexpr uint32_t kHighBinTriangleThreshold = 1024;

struct BinGrid {
  int bins_x = 0;
  int bins_y = 0;
  // Per-bin primitive counts; quad entries are visible-quad indices, tri
  // entries are visible-triangle indices (2 * quad + tri).
  std::vector<uint32_t> quad_counts;
  std::vector<uint32_t> tri_counts;
  std::vector<uint32_t> offsets;  // exclusive prefix sum of quad+tri counts
  std::vector<BinCategory> categories;
  std::vector<uint32_t> items;  // per bin: quad indices, then tri indices

  int bin_count() const { return bins_x * bins_y; }
  int bin_index(int bx, int by) const { return by * bins_x + bx; }

  std::span<const uint32_t> quad_items(int bin) const {
    return {items.data() + offsets[bin], quad_counts[bin]};
  }
  std::span<const uint32_t> tri_items(int bin) const {
    return {items.data() + offsets[bin] + quad_counts[bin], tri_counts[bin]};
  }
  uint32_t triangle_equivalents(int bin) const {
    return 2 * quad_counts[bin] + tri_counts[bin];
  }
};

// Exclusive prefix sum.
std::vector<uint32_t> compute_offsets(std::span<const uint32_t> counts);

BinCategory categorize_bin(uint32_t triangle_equivalents);

// Exact bin coverage of one triangle: invokes sink(bx, by) once per bin
// whose 32x32 block contains at least one covered pixel center. Built from
// per-pixel-row scanline intervals aggregated to bin columns; rows outside
// the triangle's y-range are trivially rejected.
template <typename Sink>
void rasterize_triangle_bins(const TriangleSetup& setup, int width, int height, Sink&& sink);

// Bins overlapped by a small quad's bin-resolution AABB (1..4 bins, a
// superset of true coverage).
template <typename Sink>
void small_quad_bins(const VisibleQuadRecord& record, Sink&& sink) {
  BinAabb box = record.bin_aabb();
  for (uint32_t by = box.y0; by <= box.y1; ++by)
    for (uint32_t bx = box.x0; bx <= box.x1; ++bx) sink(int(bx), int(by));
}

class ThreadPool;

BinGrid run_binning(const SetupOutput& setup, int width, int height, ThreadPool& pool);

// --- implementation ---------------------------------------------------------

template <typename Sink>
void rasterize_triangle_bins(const TriangleSetup& setup, int width, int height, Sink&& sink) {
  if (!setup.valid) return;
  int bins_x = (width + kBinSize - 1) / kBinSize;
  // Per bin-row bitmask of covered bin columns (up to 80 columns).
  uint64_t mask[2];
  int y = setup.y_min;
  (void)height;
  while (y <= setup.y_max) {
    int bin_row = y / kBinSize;
    int row_end = std::min(setup.y_max, (bin_row + 1) * kBinSize - 1);
    mask[0] = mask[1] = 0;
    for (; y <= row_end; ++y) {
      PixelInterval span = scanline_row_interval(setup, y, 0, width - 1);
      if (span.empty()) continue;
      int b0 = span.begin / kBinSize;
      int b1 = span.last / kBinSize;
      for (int b = b0; b <= b1; ++b) mask[b >> 6] |= uint64_t(1) << (b & 63);
    }
    for (int w = 0; w < 2; ++w) {
      uint64_t bits = mask[w];
      while (bits) {
        int b = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        if (b < bins_x) sink(b, bin_row);
      }
    }
  }
}

}  // namespace veil
