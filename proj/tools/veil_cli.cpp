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
// Rendering / comparison / benchmarking driver built on the C API only.
//
// Exit codes: 0 success (and identical images for --compare), 1 error,
// 2 images differ.

#include <veil.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct ScopedScene {
  veil_scene* handle = nullptr;
  ~ScopedScene() { veil_scene_destroy(handle); }
};

struct ScopedRender {
  veil_render* handle = nullptr;
  ~ScopedRender() { veil_render_destroy(handle); }
};

int fail(veil_status status, const std::string& what) {
  std::cerr << "veil: " << what << ": " << veil_status_string(status) << " ("
            << veil_last_error() << ")\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "veil - multi-threaded CPU renderer for exact order-independent transparency"};

  std::string scene_path;
  std::string camera_path;
  std::string output_path;
  std::string stats_path;
  std::vector<std::string> compare_paths;
  int width = 0, height = 0;
  int depth_filter_size = 3;
  int threads = 0;
  uint64_t seed = 1;
  bool alpha_threshold = false, visualize_errors = false, reference = false;
  bool force_high_path = false, backface_culling = false, group_quads = false;
  std::vector<float> background;
  std::vector<float> light_dir;
  float ambient = 0.2f;
  std::vector<double> view_projection;
  std::vector<double> eye;
  unsigned limit_low_tbr = 0, limit_low_tri_blocks = 0, limit_low_frags = 0;
  unsigned limit_high_tbr = 0, limit_high_thb = 0;

  app.add_option("--scene", scene_path,
                 "OBJ mesh path, or synthetic:<kind> with kind one of layered_quads, "
                 "intersecting_shells, random_soup, dense_bin");
  app.add_option("--camera", camera_path, "camera config file");
  app.add_option("--width", width, "viewport width (overrides camera config)");
  app.add_option("--height", height, "viewport height (overrides camera config)");
  app.add_option("--output", output_path, "output PNG path");
  app.add_option("--stats", stats_path, "write the JSON run report to this path");
  app.add_option("--depth-filter-size", depth_filter_size, "depth filter capacity (default 3)")
      ->check(CLI::Range(1, 1024));
  app.add_option("--threads", threads, "worker count (0 = hardware concurrency)");
  app.add_option("--seed", seed, "seed for synthetic scene generators");
  app.add_flag("--alpha-threshold", alpha_threshold,
               "stop blending once accumulated alpha reaches 1 - 1/128");
  app.add_flag("--visualize-errors", visualize_errors, "overlay invalid pixels in magenta");
  app.add_flag("--reference", reference, "render with the exact a-buffer reference");
  app.add_flag("--force-high-path", force_high_path, "route every bin through the high path");
  app.add_flag("--backface-culling", backface_culling, "enable world-space backface culling");
  app.add_flag("--group-quads", group_quads,
               "pair a pure triangle mesh into quads before rendering");
  app.add_option("--compare", compare_paths, "compare two PNG files and report the diff")
      ->expected(2);
  app.add_option("--background", background, "background color, RGBA in [0,1]")->expected(4);
  app.add_option("--light-dir", light_dir, "directional light direction (x y z)")->expected(3);
  app.add_option("--ambient", ambient, "ambient lighting term (default 0.2)");
  app.add_option("--view-projection", view_projection,
                 "camera matrix, 16 row-major values (overrides --camera)")
      ->expected(16);
  app.add_option("--eye", eye, "camera eye position for backface culling (x y z)")
      ->expected(3);
  app.add_option("--limit-low-tbr", limit_low_tbr,
                 "low path: tri-block-rows per block-row (default 1024)");
  app.add_option("--limit-low-tri-blocks", limit_low_tri_blocks,
                 "low path: tri-blocks per block (default 256)");
  app.add_option("--limit-low-frags", limit_low_frags,
                 "low path: fragments per half-block (default 4095)");
  app.add_option("--limit-high-tbr", limit_high_tbr,
                 "high path: tri-block-rows per block-row (default 16384)");
  app.add_option("--limit-high-thb", limit_high_thb,
                 "high path: tri-half-blocks per half-block (default 4096)");

  CLI11_PARSE(app, argc, argv);

  if (!compare_paths.empty()) {
    veil_image_diff diff;
    if (veil_status s = veil_compare_png(compare_paths[0].c_str(), compare_paths[1].c_str(),
                                         &diff);
        s != VEIL_OK)
      return fail(s, "compare");
    std::cout << "compared " << diff.width << "x" << diff.height << ": "
              << diff.differing_pixels << " differing pixels, max channel delta "
              << diff.max_channel_delta << "\n";
    return diff.differing_pixels == 0 ? 0 : 2;
  }

  if (scene_path.empty()) {
    std::cerr << "veil: --scene or --compare is required (see --help)\n";
    return 1;
  }

  ScopedScene scene;
  const std::string synthetic_prefix = "synthetic:";
  if (scene_path.rfind(synthetic_prefix, 0) == 0) {
    std::string kind = scene_path.substr(synthetic_prefix.size());
    if (veil_status s = veil_scene_synthetic(kind.c_str(), seed, width, height, &scene.handle);
        s != VEIL_OK)
      return fail(s, "generate scene");
  } else {
    if (veil_status s = veil_scene_load(scene_path.c_str(), nullptr,
                                        camera_path.empty() ? nullptr : camera_path.c_str(),
                                        &scene.handle);
        s != VEIL_OK)
      return fail(s, "load scene");
    if (width > 0 && height > 0) {
      if (veil_status s = veil_scene_set_viewport(scene.handle, width, height); s != VEIL_OK)
        return fail(s, "set viewport");
    }
  }

  if (!view_projection.empty()) {
    if (veil_status s = veil_scene_set_camera(scene.handle, view_projection.data(),
                                              eye.empty() ? nullptr : eye.data());
        s != VEIL_OK)
      return fail(s, "set camera");
  }

  if (group_quads) {
    double degenerate = 0.0;
    if (veil_status s = veil_scene_group_quads(scene.handle, &degenerate); s != VEIL_OK)
      return fail(s, "group quads");
    std::printf("grouped quads: %.2f%% degenerate\n", degenerate);
  }

  veil_render_params params;
  veil_render_params_init(&params);
  params.depth_filter_size = depth_filter_size;
  params.thread_count = threads;
  if (alpha_threshold) params.flags |= VEIL_RENDER_ALPHA_THRESHOLD;
  if (visualize_errors) params.flags |= VEIL_RENDER_VISUALIZE_ERRORS;
  if (reference) params.flags |= VEIL_RENDER_REFERENCE;
  if (force_high_path) params.flags |= VEIL_RENDER_FORCE_HIGH_PATH;
  if (backface_culling) params.flags |= VEIL_RENDER_BACKFACE_CULLING;
  if (!background.empty())
    for (int i = 0; i < 4; ++i) params.background[i] = background[size_t(i)];
  if (!light_dir.empty())
    for (int i = 0; i < 3; ++i) params.light_dir[i] = light_dir[size_t(i)];
  params.ambient = ambient;
  params.limit_low_tbr = limit_low_tbr;
  params.limit_low_tri_blocks = limit_low_tri_blocks;
  params.limit_low_frags = limit_low_frags;
  params.limit_high_tbr = limit_high_tbr;
  params.limit_high_thb = limit_high_thb;

  ScopedRender render;
  if (veil_status s = veil_render_scene(scene.handle, &params, &render.handle); s != VEIL_OK)
    return fail(s, "render");

  if (!output_path.empty()) {
    if (veil_status s = veil_render_write_png(render.handle, output_path.c_str()); s != VEIL_OK)
      return fail(s, "write PNG");
  }

  const char* report = veil_render_report_json(render.handle);
  if (!stats_path.empty()) {
    std::ofstream out(stats_path);
    if (!out) {
      std::cerr << "veil: cannot write " << stats_path << "\n";
      return 1;
    }
    out << report << "\n";
  } else {
    std::cout << report << "\n";
  }
  return 0;
}
