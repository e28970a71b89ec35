/* Copyright 2026 The veil Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the veil renderer: opaque handles, status codes, no exceptions
 * across the boundary. Thread-safe except that a given handle must not be
 * used concurrently. veil_last_error() returns the detail message of the
 * most recent failure on the calling thread. */

#ifndef VEIL_H_
#define VEIL_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct veil_scene veil_scene;
typedef struct veil_render veil_render;

typedef enum veil_status {
  VEIL_OK = 0,
  VEIL_ERR_IO = 1,
  VEIL_ERR_PARSE = 2,
  VEIL_ERR_INVALID_ARG = 3,
  VEIL_ERR_CAPACITY = 4,
  VEIL_ERR_INTERNAL = 5,
} veil_status;

const char* veil_status_string(veil_status status);
const char* veil_last_error(void);

/* --- scenes -------------------------------------------------------------- */

/* material_path and camera_path may be NULL (mtllib reference / default
 * camera). */
veil_status veil_scene_load(const char* mesh_path, const char* material_path,
                            const char* camera_path, veil_scene** out_scene);

/* kind: layered_quads | intersecting_shells | random_soup | dense_bin */
veil_status veil_scene_synthetic(const char* kind, uint64_t seed, int width, int height,
                                 veil_scene** out_scene);

/* Regroups a pure triangle mesh into quads; returns the degenerate-quad
 * percentage of the regrouped mesh. */
veil_status veil_scene_group_quads(veil_scene* scene, double* out_degenerate_percent);

veil_status veil_scene_set_viewport(veil_scene* scene, int width, int height);

/* Row-major 4x4 view-projection matrix (clip = M * position); eye may be
 * NULL, in which case it is derived from the matrix when needed. */
veil_status veil_scene_set_camera(veil_scene* scene, const double matrix[16],
                                  const double eye[3]);

void veil_scene_destroy(veil_scene* scene);

/* --- rendering ----------------------------------------------------------- */

enum veil_render_flags {
  VEIL_RENDER_REFERENCE = 1 << 0,       /* a-buffer reference renderer */
  VEIL_RENDER_ALPHA_THRESHOLD = 1 << 1, /* stop at 1 - 1/128 accumulated alpha */
  VEIL_RENDER_VISUALIZE_ERRORS = 1 << 2,
  VEIL_RENDER_FORCE_HIGH_PATH = 1 << 3,
  VEIL_RENDER_BACKFACE_CULLING = 1 << 4,
};

typedef struct veil_render_params {
  uint32_t flags;           /* veil_render_flags */
  int depth_filter_size;    /* >= 1, default 3 */
  int thread_count;         /* 0 = hardware concurrency */
  float background[4];      /* straight RGBA, default opaque black */
  float light_dir[3];       /* direction the light travels */
  float ambient;            /* ambient lighting term, default 0.2 */
  /* Rasterizer scratch limit overrides; 0 keeps the built-in limits
   * (low: 1024 tri-block-rows / 256 tri-blocks / 4095 fragments,
   * high: 16384 tri-block-rows / 4096 tri-half-blocks). */
  uint32_t limit_low_tbr;
  uint32_t limit_low_tri_blocks;
  uint32_t limit_low_frags;
  uint32_t limit_high_tbr;
  uint32_t limit_high_thb;
} veil_render_params;

void veil_render_params_init(veil_render_params* params);

veil_status veil_render_scene(const veil_scene* scene, const veil_render_params* params,
                              veil_render** out_render);

int veil_render_width(const veil_render* render);
int veil_render_height(const veil_render* render);
/* Row-major RGBA8, owned by the render handle. */
const uint8_t* veil_render_pixels(const veil_render* render);
/* One byte per pixel, 1 where a sample committed out of depth order. */
const uint8_t* veil_render_invalid_mask(const veil_render* render);
/* JSON run report (timings, samples, S/THB, bins, invalid pixels, ...). */
const char* veil_render_report_json(const veil_render* render);

veil_status veil_render_write_png(const veil_render* render, const char* path);

void veil_render_destroy(veil_render* render);

/* --- image comparison ----------------------------------------------------- */

typedef struct veil_image_diff {
  uint64_t differing_pixels;
  int max_channel_delta;
  int width;
  int height;
} veil_image_diff;

veil_status veil_compare_png(const char* path_a, const char* path_b, veil_image_diff* out_diff);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VEIL_H_ */
