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
// A-buffer reference renderer: identical culling, coverage, shading and
// sort keys as the pipeline, but every pixel's full fragment list is sorted
// exactly before front-to-back blending. Ground truth for equivalence
// testing.

#pragma once

#include <cstdint>
#include <vector>

#include "veil/image.hpp"
#include "veil/renderer.hpp"
#include "veil/scene.hpp"

namespace veil {

// One pixel's pending fragments, sorted exactly before blending.
struct FragmentList {
  struct Fragment {
    uint64_t key = 0;  // (quantized depth << 24) | visible triangle index
    Vec4f color{};     // premultiplied
  };
  std::vector<Fragment> fragments;
};

RenderResult render_reference(const Scene& scene, const RenderConfig& config);

struct ImageDiff {
  uint64_t differing_pixels = 0;
  int max_channel_delta = 0;  // in 8-bit steps
  uint64_t invalid_pixels = 0;
  double invalid_percent = 0.0;
  Image8 mask;  // white where the images differ
};

// invalid_mask may be empty; dimensions must match.
ImageDiff compare_images(const Image8& a, const Image8& b,
                         const std::vector<uint8_t>& invalid_mask = {});

}  // namespace veil
