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
// Deterministic synthetic scenes used by tests and benchmarks. Geometry is
// authored directly in clip space (identity view_projection, w = 1),
// depth z in (0, 1), colors on the exact 8-bit grid.

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "veil/scene.hpp"

namespace veil {

enum class SyntheticKind {
  layered_quads,        // full-screen translucent layers at distinct depths
  intersecting_shells,  // tilted interpenetrating sheets (sort-disorder source)
  random_soup,          // independent random translucent triangles
  dense_bin,            // >= 1024 triangle-equivalents packed into one bin
};

struct SyntheticParams {
  int width = 512;
  int height = 512;
  int layers = 8;            // layered_quads
  float layer_alpha = 0.6f;  // layered_quads
  float front_alpha = -1.0f; // layered_quads: nearest layer override when >= 0
  int triangles = 4000;      // random_soup
  int sheets = 32;           // intersecting_shells
};

Scene generate_synthetic_scene(SyntheticKind kind, uint64_t seed,
                               const SyntheticParams& params = {});

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

}  // namespace veil
