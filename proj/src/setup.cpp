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

#include "veil/setup.hpp"

#include <algorithm>
#include <cmath>

#include "veil/error.hpp"
#include "veil/thread_pool.hpp"

namespace veil {

namespace {

constexpr size_t kSetupChunk = 1024;

// Homogeneous pixel-space coordinates: P/Pw are continuous pixel coords.
inline Vec3d homogeneous_pixel(Vec4d clip, int width, int height) {
  return {(clip.x + clip.w) * 0.5 * width, (clip.w - clip.y) * 0.5 * height, clip.w};
}

// Conservative per-axis screen bound over a homogeneous polygon. Vertices
// with w > 0 bound directly; an edge crossing w = 0 sends the projection to
// infinity on the side given by the coordinate's sign at the crossing.
void extend_axis(const double* coord, const double* w, int count, const int (*edges)[2],
                 int edge_count, double limit, double* lo, double* hi) {
  *lo = limit;
  *hi = 0.0;
  bool any = false;
  for (int i = 0; i < count; ++i) {
    if (w[i] > 0.0) {
      double p = coord[i] / w[i];
      *lo = std::min(*lo, p);
      *hi = std::max(*hi, p);
      any = true;
    }
  }
  for (int e = 0; e < edge_count; ++e) {
    int i = edges[e][0], j = edges[e][1];
    if ((w[i] > 0.0) == (w[j] > 0.0)) continue;
    double t = w[i] / (w[i] - w[j]);
    double c = coord[i] + (coord[j] - coord[i]) * t;
    if (c > 0.0) {
      *hi = limit;
    } else if (c < 0.0) {
      *lo = 0.0;
    } else {
      *lo = 0.0;
      *hi = limit;
    }
    any = true;
  }
  if (!any) {
    *lo = 1.0;
    *hi = 0.0;  // empty
    return;
  }
  *lo = std::max(*lo, 0.0);
  *hi = std::min(*hi, limit);
}

ScreenAabb screen_aabb_impl(const Vec4d* clip, int count, const int (*edges)[2], int edge_count,
                            int width, int height) {
  double px[4], py[4], pw[4];
  for (int i = 0; i < count; ++i) {
    Vec3d h = homogeneous_pixel(clip[i], width, height);
    px[i] = h.x;
    py[i] = h.y;
    pw[i] = h.z;
  }
  ScreenAabb box;
  extend_axis(px, pw, count, edges, edge_count, double(width), &box.x0, &box.x1);
  extend_axis(py, pw, count, edges, edge_count, double(height), &box.y0, &box.y1);
  return box;
}

constexpr int kQuadEdges[5][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}};
constexpr int kTriEdges[3][2] = {{0, 1}, {1, 2}, {2, 0}};

// Outside tests against the six clip planes: -w<=x<=w, -w<=y<=w, 0<=z<=w.
inline uint32_t outside_mask(Vec4d c) {
  uint32_t m = 0;
  if (c.x < -c.w) m |= 1u;
  if (c.x > c.w) m |= 2u;
  if (c.y < -c.w) m |= 4u;
  if (c.y > c.w) m |= 8u;
  if (c.z < 0.0) m |= 16u;
  if (c.z > c.w) m |= 32u;
  return m;
}

inline bool triangle_front_facing(const Vec3d p[3], const std::optional<Vec3d>& eye,
                                  Vec3d forward) {
  Vec3d n = cross(p[1] - p[0], p[2] - p[0]);
  if (eye) return dot(n, *eye - p[0]) > 0.0;
  // Orthographic: front when the facet normal opposes the depth direction.
  return dot(n, forward) < 0.0;
}

struct QuadGeometry {
  Vec4d clip[4];
  Vec3d world[4];
  uint32_t tris[2][3];
  bool tri_degenerate[2];
};

QuadGeometry project_quad(const Quad& quad, const Scene& scene, const Camera& camera) {
  QuadGeometry g;
  for (int i = 0; i < 4; ++i) {
    Vec3f p = scene.vertices[quad.v[i]].position;
    g.world[i] = {p.x, p.y, p.z};
    g.clip[i] = project_to_clip(g.world[i], camera);
  }
  quad_triangle(quad, 0, g.tris[0]);
  quad_triangle(quad, 1, g.tris[1]);
  g.tri_degenerate[0] = triangle_degenerate(g.tris[0]);
  g.tri_degenerate[1] = triangle_degenerate(g.tris[1]);
  return g;
}

CullResult cull_projected(const QuadGeometry& g, const Scene& scene, const Camera& camera,
                          const RenderConfig& config) {
  CullResult result;
  if (g.tri_degenerate[0]) result.tri_cull_flags |= 1u;
  if (g.tri_degenerate[1]) result.tri_cull_flags |= 2u;
  if (g.tri_degenerate[0] && g.tri_degenerate[1]) {
    result.reason = CullReason::degenerate;
    return result;
  }

  if (config.backface_culling) {
    std::optional<Vec3d> eye = camera_eye(camera);
    Vec3d forward = camera_forward(camera);
    bool back[2];
    for (int t = 0; t < 2; ++t) {
      if (g.tri_degenerate[t]) {
        back[t] = true;
        continue;
      }
      // Quad-local corner positions: triangle 0 = (0,1,2), triangle 1 = (0,2,3).
      Vec3d p[3];
      const int corners0[3] = {0, 1, 2}, corners1[3] = {0, 2, 3};
      const int* corners = t == 0 ? corners0 : corners1;
      for (int i = 0; i < 3; ++i) p[i] = g.world[corners[i]];
      back[t] = !triangle_front_facing(p, eye, forward);
      if (back[t]) result.tri_cull_flags |= 1u << t;
    }
    if (back[0] && back[1]) {
      result.reason = CullReason::backfacing;
      return result;
    }
  }

  uint32_t all_outside = outside_mask(g.clip[0]) & outside_mask(g.clip[1]) &
                         outside_mask(g.clip[2]) & outside_mask(g.clip[3]);
  if (all_outside != 0) {
    result.reason = CullReason::frustum;
    return result;
  }

  ScreenAabb box = compute_screen_aabb(g.clip, camera.width, camera.height);
  PixelRange xr = pixel_range(box.x0, box.x1, camera.width);
  PixelRange yr = pixel_range(box.y0, box.y1, camera.height);
  if (box.empty() || xr.empty() || yr.empty()) {
    result.reason = CullReason::between_samples;
    return result;
  }

  result.bin_aabb = {uint32_t(xr.first / kBinSize), uint32_t(yr.first / kBinSize),
                     uint32_t(xr.last / kBinSize), uint32_t(yr.last / kBinSize)};
  result.size_class = result.bin_aabb.bin_count() > 4 ? SizeClass::large : SizeClass::small;
  (void)scene;
  return result;
}

}  // namespace

ScreenAabb compute_screen_aabb(const Vec4d clip[4], int width, int height) {
  return screen_aabb_impl(clip, 4, kQuadEdges, 5, width, height);
}

PixelRange pixel_range(double lo, double hi, int limit) {
  PixelRange r;
  if (!(lo <= hi)) return r;
  double first = std::ceil(lo - 0.5);
  double last = std::floor(hi - 0.5);
  r.first = std::max(0, int(first));
  r.last = std::min(limit - 1, int(last));
  return r;
}

CullResult cull_quad(const Quad& quad, const Scene& scene, const Camera& camera,
                     const RenderConfig& config) {
  return cull_projected(project_quad(quad, scene, camera), scene, camera, config);
}

TriangleSetup compute_triangle_setup(const Vec4d clip[3], const Camera& camera) {
  TriangleSetup setup;
  Vec3d v0 = homogeneous_pixel(clip[0], camera.width, camera.height);
  Vec3d v1 = homogeneous_pixel(clip[1], camera.width, camera.height);
  Vec3d v2 = homogeneous_pixel(clip[2], camera.width, camera.height);

  Vec3d e0 = cross(v1, v2);
  Vec3d e1 = cross(v2, v0);
  Vec3d e2 = cross(v0, v1);
  double det = dot(e0, v0);
  if (det == 0.0 || !std::isfinite(det)) return setup;  // zero screen area

  // Orient so that covered pixels evaluate >= 0 on all three edges.
  double s = det > 0.0 ? 1.0 : -1.0;
  Vec3d edges[3] = {e0 * s, e1 * s, e2 * s};
  for (int i = 0; i < 3; ++i) setup.edges[i] = {edges[i].x, edges[i].y, edges[i].z};

  double inv_det = 1.0 / det;
  // depth(p) = sum_i clip_z_i * e_i(p) / det interpolates NDC z; 1/w likewise.
  Vec3d dz = (e0 * clip[0].z + e1 * clip[1].z + e2 * clip[2].z) * inv_det;
  setup.depth = {dz.x, dz.y, dz.z};
  Vec3d iw = (e0 + e1 + e2) * inv_det;
  setup.inv_w = {iw.x, iw.y, iw.z};

  ScreenAabb box = screen_aabb_impl(clip, 3, kTriEdges, 3, camera.width, camera.height);
  PixelRange yr = pixel_range(box.y0, box.y1, camera.height);
  setup.y_min = yr.first;
  setup.y_max = yr.last;
  setup.valid = true;
  return setup;
}

SetupOutput run_setup(const Scene& scene, const RenderConfig& config, ThreadPool& pool) {
  validate_camera(scene.camera);
  const Camera& camera = scene.camera;

  const size_t quad_count = scene.quads.size();
  const size_t chunk_count = (quad_count + kSetupChunk - 1) / kSetupChunk;

  struct ChunkResult {
    std::vector<std::pair<uint32_t, CullResult>> visible;  // quad index, verdict
    SetupStats stats;
  };
  std::vector<ChunkResult> chunks(chunk_count);

  // Phase 1: cull and classify, chunk-parallel.
  pool.parallel_for(chunk_count, [&](size_t c, int) {
    ChunkResult& out = chunks[c];
    size_t begin = c * kSetupChunk;
    size_t end = std::min(begin + kSetupChunk, quad_count);
    for (size_t q = begin; q < end; ++q) {
      ++out.stats.input_quads;
      CullResult verdict =
          cull_projected(project_quad(scene.quads[q], scene, camera), scene, camera, config);
      switch (verdict.reason) {
        case CullReason::none:
          ++out.stats.visible_quads;
          out.visible.emplace_back(uint32_t(q), verdict);
          break;
        case CullReason::degenerate:
          ++out.stats.culled_degenerate;
          break;
        case CullReason::backfacing:
          ++out.stats.culled_backfacing;
          break;
        case CullReason::frustum:
          ++out.stats.culled_frustum;
          break;
        case CullReason::between_samples:
          ++out.stats.culled_between_samples;
          break;
      }
    }
  });

  // Compaction: visible quads keep ascending input order.
  SetupOutput output;
  std::vector<size_t> chunk_offsets(chunk_count + 1, 0);
  for (size_t c = 0; c < chunk_count; ++c) {
    chunk_offsets[c + 1] = chunk_offsets[c] + chunks[c].visible.size();
    const SetupStats& s = chunks[c].stats;
    output.stats.input_quads += s.input_quads;
    output.stats.visible_quads += s.visible_quads;
    output.stats.culled_degenerate += s.culled_degenerate;
    output.stats.culled_backfacing += s.culled_backfacing;
    output.stats.culled_frustum += s.culled_frustum;
    output.stats.culled_between_samples += s.culled_between_samples;
  }
  size_t visible_count = chunk_offsets[chunk_count];
  if (visible_count * 2 > kMaxVisibleTriangles)
    throw Error(ErrorCode::capacity, "visible primitive count exceeds 24-bit index space");

  output.quads.resize(visible_count);
  output.triangles.resize(visible_count * 2);

  // Phase 2: write packed records and triangle setups.
  pool.parallel_for(chunk_count, [&](size_t c, int) {
    const ChunkResult& in = chunks[c];
    for (size_t i = 0; i < in.visible.size(); ++i) {
      size_t slot = chunk_offsets[c] + i;
      uint32_t quad_index = in.visible[i].first;
      const CullResult& verdict = in.visible[i].second;
      const Quad& quad = scene.quads[quad_index];
      const Material& material = scene.materials[quad.material_id];
      QuadGeometry g = project_quad(quad, scene, camera);

      VisibleQuadRecord& record = output.quads[slot];
      record.packed_bin_aabb = pack_bin_aabb(verdict.bin_aabb, verdict.tri_cull_flags);
      record.size_class = verdict.size_class;
      record.material_id = quad.material_id;
      record.source_quad = quad_index;
      record.has_colors = material.uses_vertex_colors && scene.has_vertex_colors;
      record.has_normals = material.uses_vertex_normals && scene.has_vertex_normals;
      record.has_uvs = material.uses_uvs && scene.has_uvs && material.texture >= 0;
      for (int v = 0; v < 4; ++v) {
        const Vertex& vert = scene.vertices[quad.v[v]];
        if (record.has_colors) record.vertex_colors[v] = pack_color(vert.color);
        if (record.has_normals) record.vertex_normals[v] = encode_normal(vert.normal);
        if (record.has_uvs) record.vertex_uvs[v] = vert.uv;
      }

      for (int t = 0; t < 2; ++t) {
        TriangleSetup& setup = output.triangles[slot * 2 + t];
        if (verdict.tri_cull_flags & (1u << t)) continue;  // stays invalid
        const int corners0[3] = {0, 1, 2}, corners1[3] = {0, 2, 3};
        const int* corners = t == 0 ? corners0 : corners1;
        Vec4d clip[3];
        Vec3d world[3];
        for (int k = 0; k < 3; ++k) {
          clip[k] = g.clip[corners[k]];
          world[k] = g.world[corners[k]];
        }
        setup = compute_triangle_setup(clip, camera);
        Vec3d n = normalize(cross(world[1] - world[0], world[2] - world[0]));
        setup.flat_normal = encode_normal({float(n.x), float(n.y), float(n.z)});
        setup.material_id = quad.material_id;
        setup.quad_index = uint32_t(slot);
        setup.tri = uint8_t(t);
      }
    }
  });
  return output;
}

}  // namespace veil
