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
// Bin rasterization. A 32x32 bin is subdivided into 4 block-rows (32x8),
// 16 blocks (8x8) and 32 half-blocks (8x4). Phase 1 generates per-triangle
// block-row coverage records, phase 2 extracts depth-sorted tri-half-blocks
// per block, phase 3 shades samples in canonical order and blends them
// through per-pixel depth filters. The low path enforces tight limits and
// hands overflowing bins to the high path, which runs the same algorithm
// with the large limits.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "veil/binning.hpp"
#include "veil/depth_filter.hpp"
#include "veil/image.hpp"
#include "veil/packing.hpp"
#include "veil/scene.hpp"
#include "veil/setup.hpp"
#include "veil/shading.hpp"

namespace veil {

struct RasterLimits {
  uint32_t max_tbr_per_block_row = 0;
  uint32_t max_tri_blocks_per_block = 0;
  uint32_t max_thb_per_half_block = 0;
  uint32_t max_frags_per_half_block = 0;

  static RasterLimits low() { return {1024, 256, 256, 4095}; }
  static RasterLimits high() { return {16384, 4096, 4096, 0xffffffffu}; }
};

// Accumulated alpha at which remaining samples may be discarded.
constexpr float kAlphaThresholdValue = 1.0f - 1.0f / 128.0f;

struct BinStats {
  uint64_t samples = 0;          // samples blended into accumulators
  uint64_t fragments = 0;        // total per-pixel coverage generated
  uint64_t tri_half_blocks = 0;
  uint64_t segments = 0;
  int max_disorder = 0;

  void accumulate(const BinStats& o) {
    samples += o.samples;
    fragments += o.fragments;
    tri_half_blocks += o.tri_half_blocks;
    segments += o.segments;
    max_disorder = std::max(max_disorder, o.max_disorder);
  }
};

enum class BinOutcome { done, overflow };

struct FrameTarget {
  Image8* color = nullptr;
  std::vector<uint8_t>* invalid_mask = nullptr;  // one byte per pixel
  Vec4f background_premultiplied{0.0f, 0.0f, 0.0f, 1.0f};
};

struct RasterContext {
  const SetupOutput* setup = nullptr;
  const BinGrid* grid = nullptr;
  const Scene* scene = nullptr;
  const RenderConfig* config = nullptr;
  ShadeParams shade;
  FrameTarget frame;
};

inline uint8_t quantize_channel(float v) {
  if (!(v > 0.0f)) return 0;
  if (v >= 1.0f) return 255;
  return uint8_t(std::lround(double(v) * 255.0));
}

// Per-sample composite key: 22-bit quantized depth then 24-bit visible
// triangle index. Unique per (pixel, fragment), totally ordered - both the
// depth filter and the reference sort use it.
inline uint64_t sample_sort_key(uint32_t quantized_depth, uint32_t triangle_index) {
  return (uint64_t(quantized_depth) << 24) | uint64_t(triangle_index & 0xffffffu);
}

// One worker's scratch and logic; rasterizes one bin at a time and writes
// only that bin's 32x32 pixel region.
class BinRasterizer {
 public:
  explicit BinRasterizer(const RasterContext& ctx);

  // hard_limits=false: returns overflow so the caller can requeue the bin.
  // hard_limits=true: throws Error(capacity) naming the bin and limit.
  BinOutcome rasterize_bin(int bin_index, const RasterLimits& limits, bool hard_limits,
                           BinStats* stats);

  // Phase entry points, exposed for tests. Outputs land in tbr / thb /
  // thb_prefix below; both return false on a (soft) limit overflow.
  bool generate_tri_block_rows(int bin_index, const RasterLimits& limits, bool hard_limits);
  bool extract_half_blocks(int bin_index, int block, const RasterLimits& limits,
                           bool hard_limits);

  // Scratch outputs (valid after the corresponding phase).
  std::vector<TriBlockRow> tbr[4];          // per block-row, bin-list order
  std::vector<TriHalfBlock> thb[32];        // per half-block, depth-sorted
  std::vector<uint32_t> thb_prefix[32];     // inclusive fragment prefix sums

 private:
  void shade_half_block(int bin_index, int half_block, BinStats* stats);
  uint64_t half_block_fragments(int half_block) const {
    return thb_prefix[half_block].empty() ? 0 : thb_prefix[half_block].back();
  }

  const RasterContext& ctx_;
  std::vector<DepthFilter> filters_;
  std::vector<std::vector<uint64_t>> arrival_keys_;  // only with measure_disorder
  struct SortRec {
    uint64_t key;
    uint32_t tbr_ref;
  };
  std::vector<SortRec> sort_recs_;
};

}  // namespace veil
