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

#include "veil/report.hpp"

#include <json.hpp>

namespace veil {

std::string report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["config"] = {
      {"width", r.width},
      {"height", r.height},
      {"depth_filter_size", r.depth_filter_size},
      {"threads", r.threads},
      {"alpha_threshold", r.alpha_threshold},
      {"visualize_errors", r.visualize_errors},
      {"backface_culling", r.backface_culling},
      {"force_high_path", r.force_high_path},
      {"reference", r.reference},
  };
  j["timings_us"] = {
      {"setup", r.setup_us},
      {"binning", r.binning_us},
      {"low_raster", r.low_raster_us},
      {"hi_raster", r.hi_raster_us},
      {"total", r.total_us},
  };
  j["samples"] = r.samples;
  j["tri_half_blocks"] = r.tri_half_blocks;
  j["s_per_thb"] = r.s_per_thb;
  j["fragments"] = r.fragments;
  j["segments"] = r.segments;
  j["setup_stats"] = {
      {"input_quads", r.input_quads},
      {"visible_quads", r.visible_quads},
      {"visible_percent", r.visible_percent},
      {"culled_degenerate", r.culled_degenerate},
      {"culled_backfacing", r.culled_backfacing},
      {"culled_frustum", r.culled_frustum},
      {"culled_between_samples", r.culled_between_samples},
      {"degenerate_quad_percent", r.degenerate_quad_percent},
  };
  j["bins"] = {
      {"empty", r.bins_empty},
      {"low", r.bins_low},
      {"high", r.bins_high},
      {"propagated", r.bins_propagated},
  };
  j["invalid_pixels"] = {
      {"count", r.invalid_pixels},
      {"percent", r.invalid_percent},
  };
  if (r.max_disorder >= 0) j["max_disorder"] = r.max_disorder;
  return j.dump(2);
}

void fill_report_config(RunReport* report, const Camera& camera, const RenderConfig& config,
                        int resolved_threads) {
  report->width = camera.width;
  report->height = camera.height;
  report->depth_filter_size = config.depth_filter_size;
  report->threads = resolved_threads;
  report->alpha_threshold = config.alpha_threshold;
  report->visualize_errors = config.visualize_errors;
  report->backface_culling = config.backface_culling;
  report->force_high_path = config.force_high_path;
  report->reference = config.reference;
}

}  // namespace veil
