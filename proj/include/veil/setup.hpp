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
// Setup stage: cull invisible quads, classify survivors small/large and
// precompute per-triangle edge/depth/barycentric functions plus packed
// per-quad attribute records.

#pragma once

#include <cstdint>
#include <vector>

#include "veil/math.hpp"
#include "veil/packing.hpp"
#include "veil/scene.hpp"

namespace veil {

constexpr int kBinSize = 32;
constexpr int kMaxBins = 5120;
constexpr uint32_t kMaxVisibleTriangles = 1u << 24;

// f(px, py) = a*px + b*py + c over continuous pixel coordinates.
struct AffineFn {
  double a = 0.0, b = 0.0, c = 0.0;

  double eval(double px, double py) const { return a * px + b * py + c; }
};

// Per-triangle rasterization data. Coverage of a pixel center is
//   edges[i](p) >= 0 for all i  and  inv_w(p) > 0,
// where inv_w interpolates 1/clip.w (this excludes the projective sheet
// behind the eye without geometric clipping). Barycentric weights are
// edges[i](p) / sum(edges)(p); depth(p) interpolates NDC z.
struct TriangleSetup {
  AffineFn edges[3];
  AffineFn inv_w;
  AffineFn depth;
  int32_t y_min = 0, y_max = -1;  // inclusive pixel rows; empty when min > max
  uint32_t flat_normal = 0;       // X10Y10Z10 world-space facet normal
  uint32_t material_id = 0;
  uint32_t quad_index = 0;  // visible-quad record index
  uint8_t tri = 0;          // 0 or 1 within the quad
  bool valid = false;
};

enum class SizeClass : uint8_t { small = 0, large = 1 };

// Packed attributes of one visible quad (stage 1 output).
struct VisibleQuadRecord {
  uint32_t packed_bin_aabb = 0;  // 28-bit bin AABB + 2 per-triangle cull bits
  uint32_t vertex_colors[4] = {};
  uint32_t vertex_normals[4] = {};
  Vec2f vertex_uvs[4] = {};
  SizeClass size_class = SizeClass::small;
  uint32_t material_id = 0;
  uint32_t source_quad = 0;  // index in Scene::quads
  bool has_colors = false;
  bool has_normals = false;
  bool has_uvs = false;

  BinAabb bin_aabb() const {
    BinAabb box;
    uint32_t flags;
    unpack_bin_aabb(packed_bin_aabb, &box, &flags);
    return box;
  }
  uint32_t cull_flags() const { return packed_bin_aabb >> 28; }
};

enum class CullReason : uint8_t {
  none = 0,
  degenerate,
  backfacing,
  frustum,
  between_samples,
};

struct CullResult {
  CullReason reason = CullReason::none;
  SizeClass size_class = SizeClass::small;
  uint32_t tri_cull_flags = 0;  // bit t: triangle t individually culled
  BinAabb bin_aabb;

  bool culled() const { return reason != CullReason::none; }
};

// Conservative screen-space AABB in continuous pixel coordinates, valid even
// when some vertices have w <= 0 (no clipping). Empty when nothing projects
// inside the viewport.
struct ScreenAabb {
  double x0 = 0.0, y0 = 0.0, x1 = -1.0, y1 = -1.0;

  bool empty() const { return x0 > x1 || y0 > y1; }
};

ScreenAabb compute_screen_aabb(const Vec4d clip[4], int width, int height);

// Inclusive range of pixel indices whose centers lie inside [lo, hi],
// clamped to [0, limit-1]. Empty when first > last.
struct PixelRange {
  int first = 0, last = -1;

  bool empty() const { return first > last; }
};

PixelRange pixel_range(double lo, double hi, int limit);

CullResult cull_quad(const Quad& quad, const Scene& scene, const Camera& camera,
                     const RenderConfig& config);

// clip positions must not be all behind a single frustum plane; attributes
// (flat normal, material) are filled by the caller.
TriangleSetup compute_triangle_setup(const Vec4d clip[3], const Camera& camera);

struct SetupStats {
  uint64_t input_quads = 0;
  uint64_t visible_quads = 0;
  uint64_t culled_degenerate = 0;
  uint64_t culled_backfacing = 0;
  uint64_t culled_frustum = 0;
  uint64_t culled_between_samples = 0;

  double visible_percent() const {
    return input_quads ? 100.0 * double(visible_quads) / double(input_quads) : 0.0;
  }
};

struct SetupOutput {
  std::vector<VisibleQuadRecord> quads;
  // Two entries per visible quad; setups[2*q + t].valid is false for
  // individually culled triangles.
  std::vector<TriangleSetup> triangles;
  SetupStats stats;
};

class ThreadPool;

SetupOutput run_setup(const Scene& scene, const RenderConfig& config, ThreadPool& pool);

}  // namespace veil
