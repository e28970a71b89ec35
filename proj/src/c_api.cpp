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

#include "veil.h"

#include <cstring>
#include <memory>
#include <string>

#include "veil/error.hpp"
#include "veil/grouping.hpp"
#include "veil/image.hpp"
#include "veil/oracle.hpp"
#include "veil/renderer.hpp"
#include "veil/report.hpp"
#include "veil/scene.hpp"
#include "veil/synthetic.hpp"

struct veil_scene {
  veil::Scene scene;
};

struct veil_render {
  veil::RenderResult result;
  std::string report_json;
};

namespace {

thread_local std::string g_last_error;

veil_status status_from(const veil::Error& e) {
  g_last_error = e.what();
  switch (e.code()) {
    case veil::ErrorCode::io:
      return VEIL_ERR_IO;
    case veil::ErrorCode::parse:
      return VEIL_ERR_PARSE;
    case veil::ErrorCode::invalid_argument:
      return VEIL_ERR_INVALID_ARG;
    case veil::ErrorCode::capacity:
      return VEIL_ERR_CAPACITY;
    case veil::ErrorCode::internal:
      return VEIL_ERR_INTERNAL;
  }
  return VEIL_ERR_INTERNAL;
}

template <typename Fn>
veil_status guarded(Fn&& fn) {
  try {
    fn();
    return VEIL_OK;
  } catch (const veil::Error& e) {
    return status_from(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VEIL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return VEIL_ERR_INTERNAL;
  }
}

veil_status invalid_arg(const char* message) {
  g_last_error = message;
  return VEIL_ERR_INVALID_ARG;
}

}  // namespace

extern "C" {

const char* veil_status_string(veil_status status) {
  switch (status) {
    case VEIL_OK:
      return "ok";
    case VEIL_ERR_IO:
      return "I/O error";
    case VEIL_ERR_PARSE:
      return "parse error";
    case VEIL_ERR_INVALID_ARG:
      return "invalid argument";
    case VEIL_ERR_CAPACITY:
      return "capacity exceeded";
    case VEIL_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* veil_last_error(void) { return g_last_error.c_str(); }

veil_status veil_scene_load(const char* mesh_path, const char* material_path,
                            const char* camera_path, veil_scene** out_scene) {
  if (!mesh_path || !out_scene) return invalid_arg("mesh_path and out_scene are required");
  return guarded([&] {
    auto scene = std::make_unique<veil_scene>();
    scene->scene = veil::load_scene(mesh_path, material_path ? material_path : "",
                                    camera_path ? camera_path : "");
    *out_scene = scene.release();
  });
}

veil_status veil_scene_synthetic(const char* kind, uint64_t seed, int width, int height,
                                 veil_scene** out_scene) {
  if (!kind || !out_scene) return invalid_arg("kind and out_scene are required");
  auto parsed = veil::parse_synthetic_kind(kind);
  if (!parsed) return invalid_arg("unknown synthetic scene kind");
  return guarded([&] {
    veil::SyntheticParams params;
    if (width > 0) params.width = width;
    if (height > 0) params.height = height;
    auto scene = std::make_unique<veil_scene>();
    scene->scene = veil::generate_synthetic_scene(*parsed, seed, params);
    *out_scene = scene.release();
  });
}

veil_status veil_scene_group_quads(veil_scene* scene, double* out_degenerate_percent) {
  if (!scene) return invalid_arg("scene is required");
  return guarded([&] {
    veil::GroupingStats stats = veil::group_scene_quads(&scene->scene);
    if (out_degenerate_percent) *out_degenerate_percent = stats.degenerate_percent();
  });
}

veil_status veil_scene_set_viewport(veil_scene* scene, int width, int height) {
  if (!scene) return invalid_arg("scene is required");
  return guarded([&] {
    veil::Camera camera = scene->scene.camera;
    camera.width = width;
    camera.height = height;
    veil::validate_camera(camera);
    scene->scene.camera = camera;
  });
}

veil_status veil_scene_set_camera(veil_scene* scene, const double matrix[16],
                                  const double eye[3]) {
  if (!scene || !matrix) return invalid_arg("scene and matrix are required");
  return guarded([&] {
    veil::Camera camera = scene->scene.camera;
    for (int i = 0; i < 16; ++i) camera.view_projection.m[i / 4][i % 4] = matrix[i];
    if (eye) {
      camera.eye = veil::Vec3d{eye[0], eye[1], eye[2]};
    } else {
      camera.eye.reset();
    }
    scene->scene.camera = camera;
  });
}

void veil_scene_destroy(veil_scene* scene) { delete scene; }

void veil_render_params_init(veil_render_params* params) {
  if (!params) return;
  std::memset(params, 0, sizeof(*params));
  params->depth_filter_size = 3;
  params->background[3] = 1.0f;
  params->light_dir[0] = 0.3f;
  params->light_dir[1] = -0.5f;
  params->light_dir[2] = 0.8f;
  params->ambient = 0.2f;
}

veil_status veil_render_scene(const veil_scene* scene, const veil_render_params* params,
                              veil_render** out_render) {
  if (!scene || !out_render) return invalid_arg("scene and out_render are required");
  veil_render_params defaults;
  veil_render_params_init(&defaults);
  if (!params) params = &defaults;
  return guarded([&] {
    veil::RenderConfig config;
    config.reference = params->flags & VEIL_RENDER_REFERENCE;
    config.alpha_threshold = params->flags & VEIL_RENDER_ALPHA_THRESHOLD;
    config.visualize_errors = params->flags & VEIL_RENDER_VISUALIZE_ERRORS;
    config.force_high_path = params->flags & VEIL_RENDER_FORCE_HIGH_PATH;
    config.backface_culling = params->flags & VEIL_RENDER_BACKFACE_CULLING;
    config.depth_filter_size = params->depth_filter_size;
    config.worker_count = params->thread_count;
    config.background = {params->background[0], params->background[1], params->background[2],
                         params->background[3]};
    config.light_dir = {params->light_dir[0], params->light_dir[1], params->light_dir[2]};
    config.ambient = params->ambient;
    config.limit_low_tbr = params->limit_low_tbr;
    config.limit_low_tri_blocks = params->limit_low_tri_blocks;
    config.limit_low_frags = params->limit_low_frags;
    config.limit_high_tbr = params->limit_high_tbr;
    config.limit_high_thb = params->limit_high_thb;

    auto render = std::make_unique<veil_render>();
    render->result = veil::render(scene->scene, config);
    render->report_json = veil::report_to_json(render->result.report);
    *out_render = render.release();
  });
}

int veil_render_width(const veil_render* render) {
  return render ? render->result.image.width : 0;
}

int veil_render_height(const veil_render* render) {
  return render ? render->result.image.height : 0;
}

const uint8_t* veil_render_pixels(const veil_render* render) {
  return render ? render->result.image.rgba.data() : nullptr;
}

const uint8_t* veil_render_invalid_mask(const veil_render* render) {
  return render ? render->result.invalid_mask.data() : nullptr;
}

const char* veil_render_report_json(const veil_render* render) {
  return render ? render->report_json.c_str() : "";
}

veil_status veil_render_write_png(const veil_render* render, const char* path) {
  if (!render || !path) return invalid_arg("render and path are required");
  return guarded([&] { veil::save_png(render->result.image, path); });
}

void veil_render_destroy(veil_render* render) { delete render; }

veil_status veil_compare_png(const char* path_a, const char* path_b, veil_image_diff* out_diff) {
  if (!path_a || !path_b || !out_diff)
    return invalid_arg("path_a, path_b and out_diff are required");
  return guarded([&] {
    veil::Image8 a = veil::load_png(path_a);
    veil::Image8 b = veil::load_png(path_b);
    veil::ImageDiff diff = veil::compare_images(a, b);
    out_diff->differing_pixels = diff.differing_pixels;
    out_diff->max_channel_delta = diff.max_channel_delta;
    out_diff->width = a.width;
    out_diff->height = a.height;
  });
}

}  // extern "C"
