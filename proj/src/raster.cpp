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

#include "veil/raster.hpp"

#include <algorithm>

#include "veil/error.hpp"
#include "veil/scanline.hpp"

namespace veil {

namespace {

[[noreturn]] void capacity_error(int bin_index, const BinGrid& grid, const char* limit) {
  int bx = bin_index % grid.bins_x;
  int by = bin_index / grid.bins_x;
  throw Error(ErrorCode::capacity, std::string("bin (") + std::to_string(bx) + "," +
                                       std::to_string(by) + ") exceeds high-rasterizer limit: " +
                                       limit);
}

}  // namespace

BinRasterizer::BinRasterizer(const RasterContext& ctx) : ctx_(ctx) {
  filters_.assign(32, DepthFilter(std::max(1, ctx.config->depth_filter_size)));
  if (ctx.config->measure_disorder) arrival_keys_.assign(32, {});
}

bool BinRasterizer::generate_tri_block_rows(int bin_index, const RasterLimits& limits,
                                            bool hard_limits) {
  const BinGrid& grid = *ctx_.grid;
  const SetupOutput& setup = *ctx_.setup;
  const Camera& camera = ctx_.scene->camera;

  for (auto& v : tbr) v.clear();

  const int bin_x = bin_index % grid.bins_x;
  const int bin_y = bin_index / grid.bins_x;
  const int px0 = bin_x * kBinSize;
  const int py0 = bin_y * kBinSize;
  const int px_last = std::min(px0 + kBinSize - 1, camera.width - 1);
  const int py_last = std::min(py0 + kBinSize - 1, camera.height - 1);

  auto emit_triangle = [&](uint32_t tri_index) -> bool {
    const TriangleSetup& tri = setup.triangles[tri_index];
    if (!tri.valid) return true;
    int y_begin = std::max(tri.y_min, py0);
    int y_end = std::min(tri.y_max, py_last);
    if (y_begin > y_end) return true;
    int row_first = (y_begin - py0) / 8;
    int row_last = (y_end - py0) / 8;
    for (int r = row_first; r <= row_last; ++r) {
      RowSpan rows[8];
      uint32_t column_mask = 0;
      bool any = false;
      for (int ly = 0; ly < 8; ++ly) {
        int py = py0 + r * 8 + ly;
        if (py < y_begin || py > y_end) continue;
        PixelInterval span = scanline_row_interval(tri, py, px0, px_last);
        if (span.empty()) continue;
        uint32_t begin = uint32_t(span.begin - px0);
        uint32_t last = uint32_t(span.last - px0);
        rows[ly] = {begin, last};
        for (uint32_t c = begin >> 3; c <= last >> 3; ++c) column_mask |= 1u << c;
        any = true;
      }
      if (!any) continue;
      if (tbr[r].size() >= limits.max_tbr_per_block_row) {
        if (hard_limits) capacity_error(bin_index, grid, "tri-block-rows per block-row");
        return false;
      }
      tbr[r].push_back(TriBlockRow::make(rows, column_mask, tri_index));
    }
    return true;
  };

  // Small quads expand to triangles; large triangles are binned directly.
  for (uint32_t quad_index : grid.quad_items(bin_index)) {
    for (uint32_t t = 0; t < 2; ++t)
      if (!emit_triangle(quad_index * 2 + t)) return false;
  }
  for (uint32_t tri_index : grid.tri_items(bin_index)) {
    if (!emit_triangle(tri_index)) return false;
  }
  return true;
}

bool BinRasterizer::extract_half_blocks(int bin_index, int block, const RasterLimits& limits,
                                        bool hard_limits) {
  const BinGrid& grid = *ctx_.grid;
  const SetupOutput& setup = *ctx_.setup;
  const int block_row = block / 4;
  const int block_col = block % 4;
  const int bin_x = bin_index % grid.bins_x;
  const int bin_y = bin_index / grid.bins_x;
  const double block_px0 = bin_x * kBinSize + block_col * 8;
  const double block_py0 = bin_y * kBinSize + block_row * 8;

  const int upper = block * 2;
  thb[upper].clear();
  thb[upper + 1].clear();
  thb_prefix[upper].clear();
  thb_prefix[upper + 1].clear();

  // Select records overlapping this block via the column coverage bits;
  // the tri-block index equals the position in this selected list.
  sort_recs_.clear();
  const std::vector<TriBlockRow>& rows = tbr[block_row];
  for (uint32_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].column_mask() & (1u << block_col))) continue;
    if (sort_recs_.size() >= limits.max_tri_blocks_per_block) {
      if (hard_limits) capacity_error(bin_index, grid, "tri-blocks per block");
      return false;
    }
    sort_recs_.push_back({0, i});
  }

  // Depth at the centroid of covered samples within the block. The low
  // path packs the 32-bit sort key; the high path needs 12 index bits.
  // Both are lexicographic in (depth, index), so the two paths order
  // tri-blocks identically.
  const bool packed_keys = limits.max_tri_blocks_per_block <= 1024;
  auto key_for = [packed_keys](uint32_t depth, uint32_t index) {
    return packed_keys ? uint64_t(make_sort_key(depth, index))
                       : ((uint64_t(depth) << 12) | index);
  };
  for (SortRec& rec : sort_recs_) {
    const TriBlockRow& row = rows[rec.tbr_ref];
    uint32_t count = 0, sum_x = 0, sum_y = 0;
    for (int ly = 0; ly < 8; ++ly) {
      RowSpan span = row.row(ly);
      if (span.empty()) continue;
      uint32_t b = std::max<uint32_t>(span.begin, uint32_t(block_col * 8));
      uint32_t l = std::min<uint32_t>(span.last, uint32_t(block_col * 8 + 7));
      if (b > l) continue;
      uint32_t n = l - b + 1;
      count += n;
      sum_x += (b + l) * n / 2 - uint32_t(block_col * 8) * n;
      sum_y += uint32_t(ly) * n;
    }
    uint32_t index = uint32_t(&rec - sort_recs_.data());
    if (count == 0) {
      // Unreachable when column bits are consistent with the intervals.
      rec.key = key_for(0x3fffffu, index);
      continue;
    }
    double cx = block_px0 + double(sum_x) / double(count) + 0.5;
    double cy = block_py0 + double(sum_y) / double(count) + 0.5;
    uint32_t q = quantize_depth(setup.triangles[row.triangle_index()].depth.eval(cx, cy));
    rec.key = key_for(q, index);
  }
  std::sort(sort_recs_.begin(), sort_recs_.end(),
            [](const SortRec& a, const SortRec& b) { return a.key < b.key; });

  // Split each tri-block into upper/lower 8x4 halves, dropping empty halves.
  uint32_t prefix[2] = {0, 0};
  for (const SortRec& rec : sort_recs_) {
    const TriBlockRow& row = rows[rec.tbr_ref];
    for (int half = 0; half < 2; ++half) {
      RowSpan local[4];
      uint32_t frags = 0;
      for (int ly = 0; ly < 4; ++ly) {
        RowSpan span = row.row(half * 4 + ly);
        if (span.empty()) continue;
        uint32_t b = std::max<uint32_t>(span.begin, uint32_t(block_col * 8));
        uint32_t l = std::min<uint32_t>(span.last, uint32_t(block_col * 8 + 7));
        if (b > l) continue;
        local[ly] = {b - uint32_t(block_col * 8), l - uint32_t(block_col * 8)};
        frags += local[ly].count();
      }
      if (frags == 0) continue;
      int h = upper + half;
      if (thb[h].size() >= limits.max_thb_per_half_block) {
        if (hard_limits) capacity_error(bin_index, grid, "tri-half-blocks per half-block");
        return false;
      }
      prefix[half] += frags;
      if (prefix[half] > limits.max_frags_per_half_block) {
        if (hard_limits) capacity_error(bin_index, grid, "fragments per half-block");
        return false;
      }
      thb[h].push_back(TriHalfBlock::make(local, row.triangle_index(), prefix[half] & 0xfffu));
      thb_prefix[h].push_back(prefix[half]);
    }
  }
  return true;
}

void BinRasterizer::shade_half_block(int bin_index, int half_block, BinStats* stats) {
  const BinGrid& grid = *ctx_.grid;
  const SetupOutput& setup = *ctx_.setup;
  const RenderConfig& config = *ctx_.config;
  const Camera& camera = ctx_.scene->camera;
  const std::vector<TriHalfBlock>& records = thb[half_block];

  const int bin_x = bin_index % grid.bins_x;
  const int bin_y = bin_index / grid.bins_x;
  const int block = half_block / 2;
  const int half = half_block % 2;
  const int px0 = bin_x * kBinSize + (block % 4) * 8;
  const int py0 = bin_y * kBinSize + (block / 4) * 8 + half * 4;

  Vec4f acc[32] = {};
  bool invalid[32] = {};
  bool saturated[32] = {};
  int saturated_count = 0;
  const bool threshold = config.alpha_threshold;
  const bool measure = config.measure_disorder;

  for (DepthFilter& f : filters_) f.reset();
  if (measure)
    for (auto& v : arrival_keys_) v.clear();

  uint64_t enumerated = 0;
  bool stopped = false;

  // Canonical enumeration: tri-half-blocks in sorted order, then row-major
  // within each triangle. Segments are 256 samples; the count is reported
  // but segmentation has no effect on the blend order.
  for (size_t r = 0; r < records.size() && !stopped; ++r) {
    const TriHalfBlock& record = records[r];
    uint32_t tri_index = record.triangle_index();
    const TriangleSetup& tri = setup.triangles[tri_index];
    const VisibleQuadRecord& quad = setup.quads[tri_index / 2];
    const Material& material = ctx_.scene->materials[tri.material_id];
    for (int ly = 0; ly < 4 && !stopped; ++ly) {
      RowSpan span = record.row(ly);
      if (span.empty()) continue;
      for (uint32_t cx = span.begin; cx <= span.last; ++cx) {
        int px = px0 + int(cx);
        int py = py0 + ly;
        int pixel = ly * 8 + int(cx);
        ++enumerated;

        SampleContext sample = make_sample_context(tri, quad, px, py);
        Vec4f color = shade_sample(sample, material, ctx_.shade);
        uint64_t key = sample_sort_key(quantize_depth(sample.depth), tri_index);
        if (measure) arrival_keys_[pixel].push_back(key);

        bool out_of_order = false;
        if (auto popped = filters_[pixel].push(key, color, &out_of_order)) {
          acc[pixel] = blend_front_to_back(acc[pixel], popped->color);
          ++stats->samples;
          if (out_of_order) invalid[pixel] = true;
          if (threshold && !saturated[pixel] && acc[pixel].w >= kAlphaThresholdValue) {
            saturated[pixel] = true;
            if (++saturated_count == 32) {
              stopped = true;
              break;
            }
          }
        }
      }
    }
  }

  if (stopped) {
    // Remaining transmittance everywhere is below 1/128; pending samples
    // are discarded along with the unvisited tail of the stream.
    for (DepthFilter& f : filters_) f.discard_pending();
  } else {
    for (int p = 0; p < 32; ++p) {
      bool done = threshold && acc[p].w >= kAlphaThresholdValue;
      filters_[p].flush([&](const DepthFilter::Entry& e, bool out_of_order) {
        if (done) return;
        acc[p] = blend_front_to_back(acc[p], e.color);
        ++stats->samples;
        if (out_of_order) invalid[p] = true;
        if (threshold && acc[p].w >= kAlphaThresholdValue) done = true;
      });
    }
  }

  stats->segments += (enumerated + 255) / 256;
  if (measure) {
    std::vector<uint64_t> sorted;
    for (int p = 0; p < 32; ++p) {
      const auto& arrivals = arrival_keys_[p];
      if (arrivals.empty()) continue;
      sorted.assign(arrivals.begin(), arrivals.end());
      std::sort(sorted.begin(), sorted.end());
      for (size_t i = 0; i < arrivals.size(); ++i) {
        size_t pos = size_t(std::lower_bound(sorted.begin(), sorted.end(), arrivals[i]) -
                            sorted.begin());
        if (i > pos) stats->max_disorder = std::max(stats->max_disorder, int(i - pos));
      }
    }
  }

  // Composite over the background and write this half-block's pixels.
  Image8& image = *ctx_.frame.color;
  std::vector<uint8_t>& mask = *ctx_.frame.invalid_mask;
  for (int ly = 0; ly < 4; ++ly) {
    int py = py0 + ly;
    if (py >= camera.height) break;
    for (int lx = 0; lx < 8; ++lx) {
      int px = px0 + lx;
      if (px >= camera.width) break;
      int p = ly * 8 + lx;
      Vec4f out = blend_front_to_back(acc[p], ctx_.frame.background_premultiplied);
      uint8_t* dst = image.pixel(px, py);
      dst[0] = quantize_channel(out.x);
      dst[1] = quantize_channel(out.y);
      dst[2] = quantize_channel(out.z);
      dst[3] = quantize_channel(out.w);
      if (invalid[p]) mask[size_t(py) * camera.width + px] = 1;
    }
  }
}

BinOutcome BinRasterizer::rasterize_bin(int bin_index, const RasterLimits& limits,
                                        bool hard_limits, BinStats* stats) {
  if (!generate_tri_block_rows(bin_index, limits, hard_limits)) return BinOutcome::overflow;
  for (int block = 0; block < 16; ++block)
    if (!extract_half_blocks(bin_index, block, limits, hard_limits)) return BinOutcome::overflow;

  for (int h = 0; h < 32; ++h) {
    stats->tri_half_blocks += thb[h].size();
    stats->fragments += half_block_fragments(h);
  }
  for (int h = 0; h < 32; ++h) shade_half_block(bin_index, h, stats);
  return BinOutcome::done;
}

}  // namespace veil
