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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "veil/oracle.hpp"
#include "veil/renderer.hpp"
#include "veil/synthetic.hpp"

using namespace veil;
using namespace veil::test;

TEST_CASE("empty scene renders the background") {
  Scene scene;
  scene.camera = identity_camera(64, 48);
  scene.materials.emplace_back();
  RenderConfig config;
  config.background = {0.25f, 0.5f, 0.75f, 1.0f};
  RenderResult ref = render_reference(scene, config);
  RenderResult pipe = render_pipeline(scene, config);
  CHECK(ref.image == pipe.image);
  const uint8_t* p = ref.image.pixel(10, 10);
  CHECK(p[0] == 64);   // round(0.25 * 255)
  CHECK(p[1] == 128);  // round(0.5 * 255)
  CHECK(p[2] == 191);  // round(0.75 * 255)
  CHECK(p[3] == 255);
}

TEST_CASE("one opaque triangle: pipeline equals oracle exactly") {
  ClipSceneBuilder b(96, 80);
  b.pixel_triangle({10.2, 8.7}, {70.4, 20.1}, {30.9, 70.3}, 0.4, {0.9f, 0.3f, 0.2f, 1.0f});
  RenderConfig config;
  RenderResult pipe = render_pipeline(b.scene, config);
  RenderResult ref = render_reference(b.scene, config);
  CHECK(pipe.image == ref.image);
  CHECK(pipe.report.invalid_pixels == 0);
}

TEST_CASE("oracle is invariant under primitive permutation") {
  SyntheticParams params;
  params.width = params.height = 96;
  params.layers = 12;
  Scene scene = generate_synthetic_scene(SyntheticKind::layered_quads, 21, params);
  RenderConfig config;
  RenderResult a = render_reference(scene, config);

  // Reverse quad order (distinct depths, so index tie-breaks never fire).
  std::reverse(scene.quads.begin(), scene.quads.end());
  RenderResult b = render_reference(scene, config);
  CHECK(a.image == b.image);
}

TEST_CASE("oracle matches a closed-form layer composite") {
  SyntheticParams params;
  params.width = params.height = 64;
  params.layers = 5;
  Scene scene = generate_synthetic_scene(SyntheticKind::layered_quads, 8, params);
  RenderConfig config;
  config.light_dir = {0, 0, 1};  // layer normals (0,0,-1) are fully lit
  RenderResult ref = render_reference(scene, config);

  // Closed form in double precision, front to back over opaque black.
  double acc[4] = {0, 0, 0, 0};
  for (int i = 0; i < 5; ++i) {
    const Quad& q = scene.quads[i];
    Vec4f c = scene.vertices[q.v[0]].color;
    double t = 1.0 - acc[3];
    acc[0] += t * double(c.w) * c.x;
    acc[1] += t * double(c.w) * c.y;
    acc[2] += t * double(c.w) * c.z;
    acc[3] += t * double(c.w);
  }
  // Off the quads' diagonal, every layer contributes exactly one fragment.
  const uint8_t* p = ref.image.pixel(10, 20);
  for (int c = 0; c < 3; ++c)
    CHECK(std::abs(int(p[c]) - int(std::lround(acc[c] * 255.0))) <= 1);
  CHECK(p[3] == 255);
}

TEST_CASE("compare_images counts and masks") {
  Image8 a(8, 8), b(8, 8);
  ImageDiff same = compare_images(a, b);
  CHECK(same.differing_pixels == 0);
  CHECK(same.max_channel_delta == 0);

  b.pixel(3, 2)[0] = 1;  // one pixel off by one in red
  ImageDiff diff = compare_images(a, b);
  CHECK(diff.differing_pixels == 1);
  CHECK(diff.max_channel_delta == 1);
  CHECK(diff.mask.pixel(3, 2)[0] == 255);
  CHECK(diff.mask.pixel(0, 0)[0] == 0);

  Image8 c(4, 4);
  CHECK_THROWS_AS(compare_images(a, c), Error);

  std::vector<uint8_t> mask(64, 0);
  mask[5] = 1;
  mask[9] = 1;
  ImageDiff with_mask = compare_images(a, b, mask);
  CHECK(with_mask.invalid_pixels == 2);
  CHECK(with_mask.invalid_percent == doctest::Approx(100.0 * 2 / 64));
}

TEST_CASE("invalid percentage shrinks as the depth filter grows") {
  SyntheticParams params;
  params.width = params.height = 256;
  params.sheets = 32;
  Scene scene = generate_synthetic_scene(SyntheticKind::intersecting_shells, 42, params);
  uint64_t previous = ~uint64_t(0);
  for (int dfs : {1, 3, 8}) {
    RenderConfig config;
    config.depth_filter_size = dfs;
    RenderResult r = render_pipeline(scene, config);
    CHECK(r.report.invalid_pixels <= previous);
    previous = r.report.invalid_pixels;
  }
}
