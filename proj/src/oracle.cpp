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

#include "veil/oracle.hpp"

#include <algorithm>
#include <chrono>

#include "veil/error.hpp"
#include "veil/raster.hpp"
#include "veil/scanline.hpp"
#include "veil/setup.hpp"
#include "veil/thread_pool.hpp"

namespace veil {

RenderResult render_reference(const Scene& scene, const RenderConfig& config) {
  validate_scene(scene);
  const Camera& camera = scene.camera;
  ThreadPool pool(config.worker_count);

  RenderResult result;
  result.image = Image8(camera.width, camera.height);
  result.invalid_mask.assign(size_t(camera.width) * camera.height, 0);
  fill_report_config(&result.report, camera, config, pool.worker_count());
  result.report.reference = true;
  result.report.degenerate_quad_percent = scene.degenerate_quad_percent();

  const auto t_start = std::chrono::steady_clock::now();

  SetupOutput setup = run_setup(scene, config, pool);

  ShadeParams shade;
  shade.light_dir = normalize(config.light_dir);
  shade.ambient = config.ambient;
  shade.textures = scene.textures;

  const Vec4f background{config.background.x * config.background.w,
                         config.background.y * config.background.w,
                         config.background.z * config.background.w, config.background.w};

  // Per-row x bounds of each triangle come from its quad's bin AABB
  // (conservative); coverage uses the canonical predicate.
  std::vector<std::pair<int, int>> tri_x_range(setup.triangles.size(), {0, -1});
  for (size_t t = 0; t < setup.triangles.size(); ++t) {
    if (!setup.triangles[t].valid) continue;
    BinAabb box = setup.quads[t / 2].bin_aabb();
    int x0 = int(box.x0) * kBinSize;
    int x1 = std::min(int(box.x1) * kBinSize + kBinSize - 1, camera.width - 1);
    tri_x_range[t] = {x0, x1};
  }

  std::vector<uint64_t> row_samples(camera.height, 0);

  pool.parallel_for(size_t(camera.height), [&](size_t row, int) {
    int py = int(row);
    std::vector<FragmentList> lists(camera.width);
    for (size_t t = 0; t < setup.triangles.size(); ++t) {
      const TriangleSetup& tri = setup.triangles[t];
      if (!tri.valid || py < tri.y_min || py > tri.y_max) continue;
      const VisibleQuadRecord& quad = setup.quads[t / 2];
      const Material& material = scene.materials[tri.material_id];
      auto [x0, x1] = tri_x_range[t];
      for (int px = x0; px <= x1; ++px) {
        if (!covers_pixel(tri, px, py)) continue;
        SampleContext sample = make_sample_context(tri, quad, px, py);
        Vec4f color = shade_sample(sample, material, shade);
        uint64_t key = sample_sort_key(quantize_depth(sample.depth), uint32_t(t));
        lists[px].fragments.push_back({key, color});
      }
    }
    uint64_t samples = 0;
    for (int px = 0; px < camera.width; ++px) {
      auto& fragments = lists[px].fragments;
      std::sort(fragments.begin(), fragments.end(),
                [](const FragmentList::Fragment& a, const FragmentList::Fragment& b) {
                  return a.key < b.key;
                });
      Vec4f acc{};
      for (const auto& f : fragments) acc = blend_front_to_back(acc, f.color);
      samples += fragments.size();
      Vec4f out = blend_front_to_back(acc, background);
      uint8_t* dst = result.image.pixel(px, py);
      dst[0] = quantize_channel(out.x);
      dst[1] = quantize_channel(out.y);
      dst[2] = quantize_channel(out.z);
      dst[3] = quantize_channel(out.w);
    }
    row_samples[row] = samples;
  });

  const auto t_end = std::chrono::steady_clock::now();
  RunReport& report = result.report;
  report.total_us = uint64_t(
      std::chrono::duration_cast<std::chrono::microseconds>(t_end - t_start).count());
  for (uint64_t s : row_samples) report.samples += s;
  report.fragments = report.samples;
  report.input_quads = setup.stats.input_quads;
  report.visible_quads = setup.stats.visible_quads;
  report.visible_percent = setup.stats.visible_percent();
  report.culled_degenerate = setup.stats.culled_degenerate;
  report.culled_backfacing = setup.stats.culled_backfacing;
  report.culled_frustum = setup.stats.culled_frustum;
  report.culled_between_samples = setup.stats.culled_between_samples;
  return result;
}

ImageDiff compare_images(const Image8& a, const Image8& b,
                         const std::vector<uint8_t>& invalid_mask) {
  if (a.width != b.width || a.height != b.height)
    throw Error(ErrorCode::invalid_argument, "image dimensions differ");
  ImageDiff diff;
  diff.mask = Image8(a.width, a.height);
  const size_t pixels = size_t(a.width) * a.height;
  for (size_t p = 0; p < pixels; ++p) {
    int delta = 0;
    for (int c = 0; c < 4; ++c)
      delta = std::max(delta, std::abs(int(a.rgba[p * 4 + c]) - int(b.rgba[p * 4 + c])));
    if (delta > 0) {
      ++diff.differing_pixels;
      diff.max_channel_delta = std::max(diff.max_channel_delta, delta);
      uint8_t* m = diff.mask.rgba.data() + p * 4;
      m[0] = m[1] = m[2] = 255;
    }
    diff.mask.rgba[p * 4 + 3] = 255;
  }
  if (!invalid_mask.empty()) {
    if (invalid_mask.size() != pixels)
      throw Error(ErrorCode::invalid_argument, "invalid mask dimensions differ");
    for (uint8_t m : invalid_mask) diff.invalid_pixels += m;
    diff.invalid_percent = 100.0 * double(diff.invalid_pixels) / double(pixels);
  }
  return diff;
}

}  // namespace veil
