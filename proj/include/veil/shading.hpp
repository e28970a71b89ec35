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
// Sample shading. The pipeline and the reference renderer call the exact
// same functions with the exact same inputs, so shading introduces no
// divergence between them. All color math is float32 with a fixed
// operation order.

#pragma once

#include <span>

#include "veil/math.hpp"
#include "veil/scene.hpp"
#include "veil/setup.hpp"

namespace veil {

struct SampleContext {
  float b0 = 0.0f, b1 = 0.0f, b2 = 0.0f;  // perspective-correct barycentrics
  Vec4f color{1.0f, 1.0f, 1.0f, 1.0f};    // interpolated vertex color
  Vec3f normal{};                          // interpolated, unnormalized
  Vec2f uv{};
  Vec2f duv_dx{};  // analytic UV derivative per pixel step in x
  Vec2f duv_dy{};
  double depth = 0.0;
};

struct ShadeParams {
  Vec3f light_dir{0.3f, -0.5f, 0.8f};  // direction the light travels, normalized
  float ambient = 0.2f;
  std::span<const Texture> textures;
};

// Perspective-correct attribute interpolation at the pixel center, with
// analytic UV gradients from the interpolation functions themselves.
SampleContext make_sample_context(const TriangleSetup& setup, const VisibleQuadRecord& record,
                                  int px, int py);

// Premultiplied RGBA:
//   rgb   = base * vertex color * texture * min(1, ambient + lambert)
//   alpha = opacity * vertex alpha * texture alpha
Vec4f shade_sample(const SampleContext& ctx, const Material& material,
                   const ShadeParams& params);

// Trilinear mip-mapped lookup with repeat wrapping; gradients in texels
// select the level.
Vec4f sample_texture(const Texture& texture, Vec2f uv, Vec2f duv_dx, Vec2f duv_dy);

// out = acc + (1 - acc.a) * sample, both premultiplied.
inline Vec4f blend_front_to_back(Vec4f acc, Vec4f sample) {
  float t = 1.0f - acc.w;
  return {acc.x + t * sample.x, acc.y + t * sample.y, acc.z + t * sample.z,
          acc.w + t * sample.w};
}

}  // namespace veil
