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
// Scene data model and ingestion. Conventions used throughout the renderer:
//   * clip space is Vulkan-style: -w <= x,y <= w and 0 <= z <= w,
//   * NDC z is the depth value; larger depth = farther from the camera,
//   * the viewport transform maps NDC x in [-1,1] to [0,width] and NDC y
//     in [-1,1] to [height,0] (+y up), pixel centers at (i+0.5, j+0.5).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "veil/image.hpp"
#include "veil/math.hpp"

namespace veil {

struct Vertex {
  Vec3f position{};
  Vec3f normal{};
  Vec4f color{1.0f, 1.0f, 1.0f, 1.0f};
  Vec2f uv{};
};

// Two triangles (v0,v1,v2) and (v0,v2,v3); a lone triangle is stored as a
// degenerate quad whose fourth index repeats the third.
struct Quad {
  uint32_t v[4]{};
  uint32_t material_id = 0;

  // A quad that encodes fewer than two real triangles.
  bool is_degenerate() const {
    bool tri0 = v[0] == v[1] || v[1] == v[2] || v[0] == v[2];
    bool tri1 = v[0] == v[2] || v[2] == v[3] || v[0] == v[3];
    return tri0 || tri1;
  }
};

inline void quad_triangle(const Quad& q, int tri, uint32_t out[3]) {
  if (tri == 0) {
    out[0] = q.v[0];
    out[1] = q.v[1];
    out[2] = q.v[2];
  } else {
    out[0] = q.v[0];
    out[1] = q.v[2];
    out[2] = q.v[3];
  }
}

inline bool triangle_degenerate(const uint32_t t[3]) {
  return t[0] == t[1] || t[1] == t[2] || t[0] == t[2];
}

struct TextureLevel {
  int width = 0;
  int height = 0;
  std::vector<Vec4f> texels;  // straight (non-premultiplied) RGBA
};

struct Texture {
  std::vector<TextureLevel> levels;  // level 0 = full resolution
};

struct Material {
  Vec4f base_color{1.0f, 1.0f, 1.0f, 1.0f};
  float opacity = 1.0f;
  int texture = -1;  // index into Scene::textures, -1 = none
  bool uses_vertex_colors = true;
  bool uses_vertex_normals = true;
  bool uses_uvs = false;
  std::string name;
};

constexpr int kMaxViewportWidth = 2560;
constexpr int kMaxViewportHeight = 2048;

struct Camera {
  Mat4 view_projection = Mat4::identity();
  int width = 512;
  int height = 512;
  // Eye position for the world-space backface test. When absent it is
  // derived from view_projection; orthographic cameras use a direction.
  std::optional<Vec3d> eye;
};

struct RenderConfig {
  bool backface_culling = false;
  bool alpha_threshold = false;
  bool visualize_errors = false;
  bool force_high_path = false;
  bool reference = false;          // render with the a-buffer reference
  bool measure_disorder = false;   // record max per-pixel sort disorder
  int depth_filter_size = 3;
  int worker_count = 0;            // 0 = hardware concurrency
  Vec4f background{0.0f, 0.0f, 0.0f, 1.0f};
  Vec3f light_dir{0.3f, -0.5f, 0.8f};
  float ambient = 0.2f;
  // Rasterizer scratch limit overrides; 0 keeps the built-in limit.
  uint32_t limit_low_tbr = 0;         // tri-block-rows per block-row, low path
  uint32_t limit_low_tri_blocks = 0;  // tri-blocks per block, low path
  uint32_t limit_low_frags = 0;       // fragments per half-block, low path
  uint32_t limit_high_tbr = 0;        // tri-block-rows per block-row, high path
  uint32_t limit_high_thb = 0;        // tri-half-blocks per half-block, high path
};

struct Scene {
  std::vector<Vertex> vertices;
  std::vector<Quad> quads;
  std::vector<Material> materials;
  std::vector<Texture> textures;
  Camera camera;
  bool has_vertex_normals = false;
  bool has_vertex_colors = false;
  bool has_uvs = false;

  size_t triangle_count() const { return quads.size() * 2; }
  double degenerate_quad_percent() const;
};

// Throws on out-of-range viewport or vertex/material indices.
void validate_camera(const Camera& camera);
void validate_scene(const Scene& scene);

// Loads a Wavefront OBJ subset (v/vn/vt/f, triangles and quads) plus its MTL
// (newmtl/Kd/d/map_Kd). material_path overrides the mtllib reference when
// non-empty; camera_path may be empty, leaving the default camera.
Scene load_scene(const std::string& mesh_path, const std::string& material_path = {},
                 const std::string& camera_path = {});

// Camera config text file: "key = values" lines. Keys: view_projection
// (16 numbers, row-major), width, height, eye (3 numbers), or the friendly
// form look_from/look_at/up/fov_deg/near/far.
Camera load_camera_config(const std::string& path);

Camera make_look_at_camera(Vec3d from, Vec3d at, Vec3d up, double fov_deg, double near_z,
                           double far_z, int width, int height);

Vec4d project_to_clip(Vec3d position, const Camera& camera);

// Divides by w (caller guarantees w > 0) and applies the viewport transform.
Vec2d clip_to_pixel(Vec4d clip, const Camera& camera);

// Eye position (perspective) or std::nullopt (orthographic). For
// orthographic cameras use camera_forward() instead.
std::optional<Vec3d> camera_eye(const Camera& camera);

// World-space direction of increasing depth.
Vec3d camera_forward(const Camera& camera);

// Builds Texture mip chains (box filter) from an RGBA8 image.
Texture build_texture(const Image8& image);

}  // namespace veil
