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

#include "veil/shading.hpp"

#include <algorithm>
#include <cmath>

#include "veil/packing.hpp"

namespace veil {

SampleContext make_sample_context(const TriangleSetup& setup, const VisibleQuadRecord& record,
                                  int px, int py) {
  SampleContext ctx;
  const double x = px + 0.5, y = py + 0.5;
  const double e0 = setup.edges[0].eval(x, y);
  const double e1 = setup.edges[1].eval(x, y);
  const double e2 = setup.edges[2].eval(x, y);
  const double sum = e0 + e1 + e2;
  const double inv = 1.0 / sum;
  ctx.b0 = float(e0 * inv);
  ctx.b1 = float(e1 * inv);
  ctx.b2 = float(e2 * inv);
  ctx.depth = setup.depth.eval(x, y);

  // Quad corner slots for this triangle: (0,1,2) or (0,2,3).
  const int c0 = 0;
  const int c1 = setup.tri == 0 ? 1 : 2;
  const int c2 = setup.tri == 0 ? 2 : 3;

  if (record.has_colors) {
    Vec4f a = unpack_color(record.vertex_colors[c0]);
    Vec4f b = unpack_color(record.vertex_colors[c1]);
    Vec4f c = unpack_color(record.vertex_colors[c2]);
    ctx.color = a * ctx.b0 + b * ctx.b1 + c * ctx.b2;
  }
  if (record.has_normals) {
    Vec3f a = decode_normal(record.vertex_normals[c0]);
    Vec3f b = decode_normal(record.vertex_normals[c1]);
    Vec3f c = decode_normal(record.vertex_normals[c2]);
    ctx.normal = a * ctx.b0 + b * ctx.b1 + c * ctx.b2;
  } else {
    ctx.normal = decode_normal(setup.flat_normal);
  }
  if (record.has_uvs) {
    Vec2f uv0 = record.vertex_uvs[c0];
    Vec2f uv1 = record.vertex_uvs[c1];
    Vec2f uv2 = record.vertex_uvs[c2];
    // uv(p) = N(p) / D(p) with N = sum(uv_i * e_i) and D = sum(e_i);
    // gradients by the quotient rule, evaluated at the pixel.
    double nu = uv0.x * e0 + uv1.x * e1 + uv2.x * e2;
    double nv = uv0.y * e0 + uv1.y * e1 + uv2.y * e2;
    double nu_dx = uv0.x * setup.edges[0].a + uv1.x * setup.edges[1].a + uv2.x * setup.edges[2].a;
    double nv_dx = uv0.y * setup.edges[0].a + uv1.y * setup.edges[1].a + uv2.y * setup.edges[2].a;
    double nu_dy = uv0.x * setup.edges[0].b + uv1.x * setup.edges[1].b + uv2.x * setup.edges[2].b;
    double nv_dy = uv0.y * setup.edges[0].b + uv1.y * setup.edges[1].b + uv2.y * setup.edges[2].b;
    double d_dx = setup.edges[0].a + setup.edges[1].a + setup.edges[2].a;
    double d_dy = setup.edges[0].b + setup.edges[1].b + setup.edges[2].b;
    double inv2 = inv * inv;
    ctx.uv = {float(nu * inv), float(nv * inv)};
    ctx.duv_dx = {float((nu_dx * sum - nu * d_dx) * inv2), float((nv_dx * sum - nv * d_dx) * inv2)};
    ctx.duv_dy = {float((nu_dy * sum - nu * d_dy) * inv2), float((nv_dy * sum - nv * d_dy) * inv2)};
  }
  return ctx;
}

namespace {

inline Vec4f bilinear(const TextureLevel& level, float u, float v) {
  // Repeat wrapping; u,v in texture coordinates, texel centers at +0.5.
  float x = u * float(level.width) - 0.5f;
  float y = v * float(level.height) - 0.5f;
  float fx = std::floor(x), fy = std::floor(y);
  float wx = x - fx, wy = y - fy;
  auto wrap = [](int i, int n) {
    int m = i % n;
    return m < 0 ? m + n : m;
  };
  int x0 = wrap(int(fx), level.width), x1 = wrap(int(fx) + 1, level.width);
  int y0 = wrap(int(fy), level.height), y1 = wrap(int(fy) + 1, level.height);
  Vec4f t00 = level.texels[size_t(y0) * level.width + x0];
  Vec4f t10 = level.texels[size_t(y0) * level.width + x1];
  Vec4f t01 = level.texels[size_t(y1) * level.width + x0];
  Vec4f t11 = level.texels[size_t(y1) * level.width + x1];
  Vec4f top = t00 * (1.0f - wx) + t10 * wx;
  Vec4f bot = t01 * (1.0f - wx) + t11 * wx;
  return top * (1.0f - wy) + bot * wy;
}

}  // namespace

Vec4f sample_texture(const Texture& texture, Vec2f uv, Vec2f duv_dx, Vec2f duv_dy) {
  const TextureLevel& base = texture.levels[0];
  float gx = length(Vec2f{duv_dx.x * float(base.width), duv_dx.y * float(base.height)});
  float gy = length(Vec2f{duv_dy.x * float(base.width), duv_dy.y * float(base.height)});
  float rho = std::max(gx, gy);
  float level = rho > 0.0f ? std::log2(rho) : 0.0f;
  if (!(level > 0.0f)) return bilinear(base, uv.x, uv.y);
  float max_level = float(texture.levels.size() - 1);
  if (level >= max_level) {
    const TextureLevel& top = texture.levels.back();
    return bilinear(top, uv.x, uv.y);
  }
  int l0 = int(level);
  float frac = level - float(l0);
  Vec4f a = bilinear(texture.levels[l0], uv.x, uv.y);
  Vec4f b = bilinear(texture.levels[l0 + 1], uv.x, uv.y);
  return a * (1.0f - frac) + b * frac;
}

Vec4f shade_sample(const SampleContext& ctx, const Material& material,
                   const ShadeParams& params) {
  Vec4f tex{1.0f, 1.0f, 1.0f, 1.0f};
  if (material.texture >= 0 && size_t(material.texture) < params.textures.size())
    tex = sample_texture(params.textures[material.texture], ctx.uv, ctx.duv_dx, ctx.duv_dy);

  Vec3f n = normalize(ctx.normal);
  float lambert = std::max(0.0f, -(n.x * params.light_dir.x + n.y * params.light_dir.y +
                                   n.z * params.light_dir.z));
  float light = std::min(1.0f, params.ambient + lambert);

  float r = material.base_color.x * ctx.color.x * tex.x * light;
  float g = material.base_color.y * ctx.color.y * tex.y * light;
  float b = material.base_color.z * ctx.color.z * tex.z * light;
  float a = material.opacity * ctx.color.w * tex.w;
  return {r * a, g * a, b * a, a};
}

}  // namespace veil
