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
#include <string>

#include "veil/scene.hpp"

namespace veil {

// Per-run statistics; timings are wall-clock microseconds per stage.
struct RunReport {
  // config echo
  int width = 0;
  int height = 0;
  int depth_filter_size = 0;
  int threads = 0;
  bool alpha_threshold = false;
  bool visualize_errors = false;
  bool backface_culling = false;
  bool force_high_path = false;
  bool reference = false;

  uint64_t setup_us = 0;
  uint64_t binning_us = 0;
  uint64_t low_raster_us = 0;
  uint64_t hi_raster_us = 0;
  uint64_t total_us = 0;

  uint64_t samples = 0;
  uint64_t tri_half_blocks = 0;
  double s_per_thb = 0.0;  // samples / tri-half-blocks
  uint64_t fragments = 0;
  uint64_t segments = 0;

  uint64_t input_quads = 0;
  uint64_t visible_quads = 0;
  double visible_percent = 0.0;
  uint64_t culled_degenerate = 0;
  uint64_t culled_backfacing = 0;
  uint64_t culled_frustum = 0;
  uint64_t culled_between_samples = 0;
  double degenerate_quad_percent = 0.0;

  uint64_t bins_empty = 0;
  uint64_t bins_low = 0;
  uint64_t bins_high = 0;
  uint64_t bins_propagated = 0;

  uint64_t invalid_pixels = 0;
  double invalid_percent = 0.0;

  int max_disorder = -1;  // -1 = not measured
};

// Stable-schema JSON document; timings are the only fields that vary
// between identical invocations.
std::string report_to_json(const RunReport& report);

void fill_report_config(RunReport* report, const Camera& camera, const RenderConfig& config,
                        int resolved_threads);

}  // namespace veil
