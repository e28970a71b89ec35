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

#pragma once

#include <cstdint>
#include <vector>

#include "veil/image.hpp"
#include "veil/report.hpp"
#include "veil/scene.hpp"

namespace veil {

struct RenderResult {
  Image8 image;
  std::vector<uint8_t> invalid_mask;  // one byte per pixel, 1 = invalid
  RunReport report;
};

// Full pipeline render: setup -> binning -> low/high bin rasterization.
// Output is bit-identical for any worker count.
RenderResult render_pipeline(const Scene& scene, const RenderConfig& config);

// Dispatches to the reference renderer when config.reference is set.
RenderResult render(const Scene& scene, const RenderConfig& config);

}  // namespace veil
