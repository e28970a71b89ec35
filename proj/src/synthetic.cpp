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

#include "veil/synthetic.hpp"

#include <cmath>
#include <random>

#include "veil/error.hpp"
#include "veil/setup.hpp"

namespace veil {

namespace {

// Hand-rolled uniforms keep generated scenes pinned to the seed without
// depending on distribution implementations.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(uint64_t seed) : engine(seed) {}

  double uniform(double lo, double hi) {
    double u = double(engine() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + int(engine() % uint64_t(hi - lo + 1));
  }
  // Color channel on the exact 8-bit grid so packing round-trips.
  float channel() { return float(uniform_int(40, 255)) / 255.0f; }
};

struct Builder {
  Scene scene;

  explicit Builder(const SyntheticParams& params) {
    scene.camera.view_projection = Mat4::identity();
    scene.camera.width = params.width;
    scene.camera.height = params.height;
    Material material;
    material.name = "synthetic";
    scene.materials.push_back(material);
    scene.has_vertex_colors = true;
    scene.has_vertex_normals = true;
  }

  uint32_t vertex(double x, double y, double z, Vec4f color) {
    Vertex v;
    v.position = {float(x), float(y), float(z)};
    v.normal = {0.0f, 0.0f, -1.0f};
    v.color = color;
    scene.vertices.push_back(v);
    return uint32_t(scene.vertices.size() - 1);
  }

  // Corners counter-clockwise in NDC; depth per corner.
  void quad(const Vec2d corners[4], const double z[4], Vec4f color) {
    Quad q;
    for (int i = 0; i < 4; ++i) q.v[i] = vertex(corners[i].x, corners[i].y, z[i], color);
    scene.quads.push_back(q);
  }

  void triangle(const Vec2d corners[3], const double z[3], Vec4f color) {
    Quad q;
    for (int i = 0; i < 3; ++i) q.v[i] = vertex(corners[i].x, corners[i].y, z[i], color);
    q.v[3] = q.v[2];
    scene.quads.push_back(q);
  }
};

float alpha_grid(Rng& rng, float lo, float hi) {
  int a_lo = int(std::lround(lo * 255.0f));
  int a_hi = int(std::lround(hi * 255.0f));
  return float(rng.uniform_int(a_lo, a_hi)) / 255.0f;
}

Scene layered_quads(uint64_t seed, const SyntheticParams& params) {
  Builder b(params);
  Rng rng(seed);
  int n = std::max(1, params.layers);
  for (int i = 0; i < n; ++i) {
    double z = 0.2 + 0.6 * double(i) / double(std::max(1, n - 1));
    float alpha = params.layer_alpha;
    if (i == 0 && params.front_alpha >= 0.0f) alpha = params.front_alpha;
    alpha = float(std::lround(alpha * 255.0f)) / 255.0f;
    Vec4f color{rng.channel(), rng.channel(), rng.channel(), alpha};
    Vec2d corners[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    double depth[4] = {z, z, z, z};
    b.quad(corners, depth, color);
  }
  return b.scene;
}

Scene intersecting_shells(uint64_t seed, const SyntheticParams& params) {
  Builder b(params);
  Rng rng(seed);
  int n = std::max(2, params.sheets);
  for (int i = 0; i < n; ++i) {
    // Full-screen sheet whose depth tilts along one axis; all sheets cross
    // near the middle of the depth range, so per-pixel depth order differs
    // from block-centroid order around the intersections.
    double slope = rng.uniform(0.10, 0.30) * (rng.uniform_int(0, 1) ? 1.0 : -1.0);
    double center = rng.uniform(-0.3, 0.3);
    bool tilt_x = i % 3 != 2;
    Vec4f color{rng.channel(), rng.channel(), rng.channel(), 128.0f / 255.0f};
    Vec2d corners[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    double depth[4];
    for (int c = 0; c < 4; ++c) {
      double t = tilt_x ? corners[c].x : corners[c].y;
      depth[c] = 0.5 + slope * (t - center);
    }
    b.quad(corners, depth, color);
  }
  return b.scene;
}

Scene random_soup(uint64_t seed, const SyntheticParams& params) {
  Builder b(params);
  Rng rng(seed);
  int n = std::max(1, params.triangles);
  for (int i = 0; i < n; ++i) {
    double cx = rng.uniform(-0.85, 0.85);
    double cy = rng.uniform(-0.85, 0.85);
    double z = rng.uniform(0.05, 0.95);
    double r = rng.uniform(0.02, 0.12);
    Vec2d corners[3];
    double depth[3];
    for (int k = 0; k < 3; ++k) {
      corners[k] = {cx + rng.uniform(-r, r), cy + rng.uniform(-r, r)};
      depth[k] = z + rng.uniform(-0.01, 0.01);
    }
    Vec4f color{rng.channel(), rng.channel(), rng.channel(), alpha_grid(rng, 0.25f, 0.85f)};
    b.triangle(corners, depth, color);
  }
  return b.scene;
}

Scene dense_bin(uint64_t seed, const SyntheticParams& params) {
  Builder b(params);
  Rng rng(seed);
  // One 32x32 bin packed with more than 1024 triangle-equivalents.
  double bin_w = 2.0 * kBinSize / double(params.width);
  double bin_h = 2.0 * kBinSize / double(params.height);
  double x0 = -1.0 + 4 * bin_w;
  double y0 = -1.0 + 4 * bin_h;
  for (int i = 0; i < 600; ++i) {
    double cx = x0 + rng.uniform(0.2, 0.8) * bin_w;
    double cy = y0 + rng.uniform(0.2, 0.8) * bin_h;
    double z = rng.uniform(0.1, 0.9);
    double r = rng.uniform(0.05, 0.15) * bin_w;
    Vec2d corners[4] = {{cx - r, cy - r}, {cx + r, cy - r}, {cx + r, cy + r}, {cx - r, cy + r}};
    double depth[4] = {z, z, z, z};
    Vec4f color{rng.channel(), rng.channel(), rng.channel(), alpha_grid(rng, 0.3f, 0.7f)};
    b.quad(corners, depth, color);
  }
  // Sparse surroundings so other bins stay on the low path.
  for (int i = 0; i < 60; ++i) {
    double cx = rng.uniform(-0.9, 0.9);
    double cy = rng.uniform(-0.9, 0.9);
    double z = rng.uniform(0.1, 0.9);
    double r = rng.uniform(0.02, 0.06);
    Vec2d corners[4] = {{cx - r, cy - r}, {cx + r, cy - r}, {cx + r, cy + r}, {cx - r, cy + r}};
    double depth[4] = {z, z, z, z};
    Vec4f color{rng.channel(), rng.channel(), rng.channel(), alpha_grid(rng, 0.3f, 0.7f)};
    b.quad(corners, depth, color);
  }
  return b.scene;
}

}  // namespace

Scene generate_synthetic_scene(SyntheticKind kind, uint64_t seed, const SyntheticParams& params) {
  switch (kind) {
    case SyntheticKind::layered_quads:
      return layered_quads(seed, params);
    case SyntheticKind::intersecting_shells:
      return intersecting_shells(seed, params);
    case SyntheticKind::random_soup:
      return random_soup(seed, params);
    case SyntheticKind::dense_bin:
      return dense_bin(seed, params);
  }
  throw Error(ErrorCode::invalid_argument, "unknown synthetic scene kind");
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  if (name == "layered_quads") return SyntheticKind::layered_quads;
  if (name == "intersecting_shells") return SyntheticKind::intersecting_shells;
  if (name == "random_soup") return SyntheticKind::random_soup;
  if (name == "dense_bin") return SyntheticKind::dense_bin;
  return std::nullopt;
}

}  // namespace veil
