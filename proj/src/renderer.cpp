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

#include "veil/renderer.hpp"

#include <algorithm>
#include <chrono>

#include "veil/binning.hpp"
#include "veil/error.hpp"
#include "veil/oracle.hpp"
#include "veil/raster.hpp"
#include "veil/setup.hpp"
#include "veil/thread_pool.hpp"

namespace veil {

namespace {

using Clock = std::chrono::steady_clock;

uint64_t elapsed_us(Clock::time_point begin, Clock::time_point end) {
  return uint64_t(std::chrono::duration_cast<std::chrono::microseconds>(end - begin).count());
}

Vec4f premultiply(Vec4f straight) {
  return {straight.x * straight.w, straight.y * straight.w, straight.z * straight.w, straight.w};
}

void fill_background(Image8* image, Vec4f background_premultiplied) {
  uint8_t px[4] = {
      quantize_channel(background_premultiplied.x),
      quantize_channel(background_premultiplied.y),
      quantize_channel(background_premultiplied.z),
      quantize_channel(background_premultiplied.w),
  };
  for (size_t i = 0; i < image->rgba.size(); i += 4) {
    image->rgba[i] = px[0];
    image->rgba[i + 1] = px[1];
    image->rgba[i + 2] = px[2];
    image->rgba[i + 3] = px[3];
  }
}

void apply_error_overlay(Image8* image, const std::vector<uint8_t>& invalid_mask) {
  for (size_t p = 0; p < invalid_mask.size(); ++p) {
    if (!invalid_mask[p]) continue;
    uint8_t* dst = image->rgba.data() + p * 4;
    dst[0] = 255;  // invalid pixels show as pure magenta
    dst[1] = 0;
    dst[2] = 255;
    dst[3] = 255;
  }
}

}  // namespace

RenderResult render_pipeline(const Scene& scene, const RenderConfig& config) {
  validate_scene(scene);
  if (config.depth_filter_size < 1)
    throw Error(ErrorCode::invalid_argument, "depth_filter_size must be >= 1");

  const Camera& camera = scene.camera;
  ThreadPool pool(config.worker_count);

  RenderResult result;
  result.image = Image8(camera.width, camera.height);
  result.invalid_mask.assign(size_t(camera.width) * camera.height, 0);
  fill_report_config(&result.report, camera, config, pool.worker_count());
  result.report.degenerate_quad_percent = scene.degenerate_quad_percent();

  const auto t_start = Clock::now();

  // Stage 1: setup.
  SetupOutput setup = run_setup(scene, config, pool);
  const auto t_setup = Clock::now();

  // Stage 2: binning.
  BinGrid grid = run_binning(setup, camera.width, camera.height, pool);
  const auto t_binning = Clock::now();

  // Stage 3: bin rasterization.
  RasterContext ctx;
  ctx.setup = &setup;
  ctx.grid = &grid;
  ctx.scene = &scene;
  ctx.config = &config;
  ctx.shade.light_dir = normalize(config.light_dir);
  ctx.shade.ambient = config.ambient;
  ctx.shade.textures = scene.textures;
  ctx.frame.color = &result.image;
  ctx.frame.invalid_mask = &result.invalid_mask;
  ctx.frame.background_premultiplied = premultiply(config.background);

  fill_background(&result.image, ctx.frame.background_premultiplied);

  std::vector<int> low_bins;
  std::vector<int> high_bins;
  for (int b = 0; b < grid.bin_count(); ++b) {
    switch (grid.categories[b]) {
      case BinCategory::empty:
        break;
      case BinCategory::low:
        (config.force_high_path ? high_bins : low_bins).push_back(b);
        break;
      case BinCategory::high:
        high_bins.push_back(b);
        break;
    }
  }

  std::vector<BinRasterizer> workers;
  workers.reserve(pool.worker_count());
  for (int w = 0; w < pool.worker_count(); ++w) workers.emplace_back(ctx);

  std::vector<BinStats> bin_stats(grid.bin_count());
  std::vector<uint8_t> propagated(grid.bin_count(), 0);

  RasterLimits low_limits = RasterLimits::low();
  RasterLimits high_limits = RasterLimits::high();
  if (config.limit_low_tbr) low_limits.max_tbr_per_block_row = config.limit_low_tbr;
  if (config.limit_low_tri_blocks) {
    low_limits.max_tri_blocks_per_block = config.limit_low_tri_blocks;
    low_limits.max_thb_per_half_block = config.limit_low_tri_blocks;
  }
  if (config.limit_low_frags) low_limits.max_frags_per_half_block = config.limit_low_frags;
  if (config.limit_high_tbr) high_limits.max_tbr_per_block_row = config.limit_high_tbr;
  if (config.limit_high_thb) high_limits.max_thb_per_half_block = config.limit_high_thb;
  if (low_limits.max_tbr_per_block_row > high_limits.max_tbr_per_block_row ||
      low_limits.max_thb_per_half_block > high_limits.max_thb_per_half_block)
    throw Error(ErrorCode::invalid_argument, "low rasterizer limits exceed high limits");

  // Low-density bins first; overflowing bins are requeued for the high path.
  pool.parallel_for(low_bins.size(), [&](size_t i, int worker) {
    int bin = low_bins[i];
    BinStats stats;
    if (workers[worker].rasterize_bin(bin, low_limits, false, &stats) == BinOutcome::done) {
      bin_stats[bin] = stats;
    } else {
      propagated[bin] = 1;
    }
  });
  const auto t_low = Clock::now();

  for (int b = 0; b < grid.bin_count(); ++b)
    if (propagated[b]) high_bins.push_back(b);
  std::sort(high_bins.begin(), high_bins.end());

  pool.parallel_for(high_bins.size(), [&](size_t i, int worker) {
    int bin = high_bins[i];
    BinStats stats;
    workers[worker].rasterize_bin(bin, high_limits, true, &stats);
    bin_stats[bin] = stats;
  });
  const auto t_high = Clock::now();

  if (config.visualize_errors) apply_error_overlay(&result.image, result.invalid_mask);

  // Deterministic stat merge in bin order.
  BinStats total;
  for (const BinStats& s : bin_stats) total.accumulate(s);

  RunReport& report = result.report;
  report.setup_us = elapsed_us(t_start, t_setup);
  report.binning_us = elapsed_us(t_setup, t_binning);
  report.low_raster_us = elapsed_us(t_binning, t_low);
  report.hi_raster_us = elapsed_us(t_low, t_high);
  report.total_us = elapsed_us(t_start, t_high);
  report.samples = total.samples;
  report.tri_half_blocks = total.tri_half_blocks;
  report.s_per_thb =
      total.tri_half_blocks ? double(total.samples) / double(total.tri_half_blocks) : 0.0;
  report.fragments = total.fragments;
  report.segments = total.segments;
  report.input_quads = setup.stats.input_quads;
  report.visible_quads = setup.stats.visible_quads;
  report.visible_percent = setup.stats.visible_percent();
  report.culled_degenerate = setup.stats.culled_degenerate;
  report.culled_backfacing = setup.stats.culled_backfacing;
  report.culled_frustum = setup.stats.culled_frustum;
  report.culled_between_samples = setup.stats.culled_between_samples;
  for (int b = 0; b < grid.bin_count(); ++b) {
    switch (grid.categories[b]) {
      case BinCategory::empty:
        ++report.bins_empty;
        break;
      case BinCategory::low:
        ++report.bins_low;
        break;
      case BinCategory::high:
        ++report.bins_high;
        break;
    }
    if (propagated[b]) ++report.bins_propagated;
  }
  uint64_t invalid = 0;
  for (uint8_t m : result.invalid_mask) invalid += m;
  report.invalid_pixels = invalid;
  report.invalid_percent = 100.0 * double(invalid) / double(result.invalid_mask.size());
  report.max_disorder = config.measure_disorder ? total.max_disorder : -1;
  return result;
}

RenderResult render(const Scene& scene, const RenderConfig& config) {
  if (config.reference) return render_reference(scene, config);
  return render_pipeline(scene, config);
}

}  // namespace veil
