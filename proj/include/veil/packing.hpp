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
// Bit-packed encodings shared across the pipeline stages: X10Y10Z10 normals,
// R8G8B8A8 colors, 28+2-bit bin AABBs, per-triangle coverage records and the
// depth/index sort key.

#pragma once

#include <cmath>
#include <cstdint>

#include "veil/error.hpp"
#include "veil/math.hpp"

namespace veil {

// --- X10Y10Z10 signed normal encoding -------------------------------------
// Each component maps to round(c * 511); -512 is unused so the poles are
// exactly representable.

inline uint32_t encode_normal(Vec3f n) {
  auto enc = [](float c) -> uint32_t {
    long q = std::lround(double(c) * 511.0);
    if (q > 511) q = 511;
    if (q < -511) q = -511;
    return uint32_t(q) & 0x3ffu;
  };
  return enc(n.x) | (enc(n.y) << 10) | (enc(n.z) << 20);
}

inline Vec3f decode_normal(uint32_t word) {
  auto dec = [](uint32_t field) -> float {
    int32_t q = int32_t(field << 22) >> 22;  // sign-extend 10 bits
    return float(q) / 511.0f;
  };
  return {dec(word & 0x3ffu), dec((word >> 10) & 0x3ffu), dec((word >> 20) & 0x3ffu)};
}

// --- R8G8B8A8 color --------------------------------------------------------

inline uint32_t pack_color(Vec4f c) {
  auto enc = [](float v) -> uint32_t {
    long q = std::lround(double(v) * 255.0);
    if (q < 0) q = 0;
    if (q > 255) q = 255;
    return uint32_t(q);
  };
  return enc(c.x) | (enc(c.y) << 8) | (enc(c.z) << 16) | (enc(c.w) << 24);
}

inline Vec4f unpack_color(uint32_t word) {
  return {float(word & 0xffu) / 255.0f, float((word >> 8) & 0xffu) / 255.0f,
          float((word >> 16) & 0xffu) / 255.0f, float((word >> 24) & 0xffu) / 255.0f};
}

// --- bin-resolution AABB: 4 x 7 bits + 2 cull-flag bits --------------------

struct BinAabb {
  uint32_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive bin coordinates

  uint32_t bin_count() const { return (x1 - x0 + 1) * (y1 - y0 + 1); }
  bool operator==(const BinAabb&) const = default;
};

inline uint32_t pack_bin_aabb(BinAabb box, uint32_t cull_flags) {
  if (box.x0 > 127 || box.y0 > 127 || box.x1 > 127 || box.y1 > 127)
    throw Error(ErrorCode::capacity, "bin AABB coordinate exceeds 7 bits");
  return box.x0 | (box.y0 << 7) | (box.x1 << 14) | (box.y1 << 21) |
         ((cull_flags & 0x3u) << 28);
}

inline void unpack_bin_aabb(uint32_t word, BinAabb* box, uint32_t* cull_flags) {
  box->x0 = word & 0x7fu;
  box->y0 = (word >> 7) & 0x7fu;
  box->x1 = (word >> 14) & 0x7fu;
  box->y1 = (word >> 21) & 0x7fu;
  *cull_flags = (word >> 28) & 0x3u;
}

// --- per-row pixel intervals ------------------------------------------------
// Inclusive [begin, last]; begin > last encodes an empty row. The canonical
// empty encodings are (31, 0) for 5-bit rows and (7, 0) for 3-bit rows.

struct RowSpan {
  uint32_t begin = 31;
  uint32_t last = 0;

  bool empty() const { return begin > last; }
  uint32_t count() const { return empty() ? 0 : last - begin + 1; }
  bool operator==(const RowSpan&) const = default;
};

// Coverage of one triangle within a 32x8 block-row: 8 rows of 5+5-bit
// intervals, 4 block-column coverage bits and a 24-bit visible-triangle
// index packed into 128 bits.
struct TriBlockRow {
  uint64_t lo = 0;
  uint64_t hi = 0;

  static TriBlockRow make(const RowSpan rows[8], uint32_t column_mask, uint32_t tri_index) {
    TriBlockRow r;
    for (int i = 0; i < 8; ++i) {
      uint64_t bits = (uint64_t(rows[i].begin & 31u)) | (uint64_t(rows[i].last & 31u) << 5);
      int off = 10 * i;
      if (off < 60) {
        r.lo |= bits << off;
        if (off + 10 > 64) r.hi |= bits >> (64 - off);
      } else if (off >= 64) {
        r.hi |= bits << (off - 64);
      } else {  // off == 60, straddles the word boundary
        r.lo |= bits << 60;
        r.hi |= bits >> 4;
      }
    }
    r.hi |= uint64_t(column_mask & 0xfu) << (80 - 64);
    r.hi |= uint64_t(tri_index & 0xffffffu) << (84 - 64);
    return r;
  }

  RowSpan row(int i) const {
    int off = 10 * i;
    uint64_t bits;
    if (off + 10 <= 64) {
      bits = lo >> off;
    } else if (off >= 64) {
      bits = hi >> (off - 64);
    } else {
      bits = (lo >> off) | (hi << (64 - off));
    }
    return {uint32_t(bits & 31u), uint32_t((bits >> 5) & 31u)};
  }

  uint32_t column_mask() const { return uint32_t(hi >> (80 - 64)) & 0xfu; }
  uint32_t triangle_index() const { return uint32_t(hi >> (84 - 64)) & 0xffffffu; }

  bool operator==(const TriBlockRow&) const = default;
};

// Coverage of one triangle within an 8x4 half-block: 4 rows of 3+3-bit
// intervals, a 24-bit visible-triangle index and the low 12 bits of the
// fragment-count prefix sum, packed into 64 bits.
struct TriHalfBlock {
  uint64_t bits = 0;

  static TriHalfBlock make(const RowSpan rows[4], uint32_t tri_index, uint32_t prefix_sum) {
    TriHalfBlock r;
    for (int i = 0; i < 4; ++i) {
      r.bits |= (uint64_t(rows[i].begin & 7u) | (uint64_t(rows[i].last & 7u) << 3)) << (6 * i);
    }
    r.bits |= uint64_t(tri_index & 0xffffffu) << 24;
    r.bits |= uint64_t(prefix_sum & 0xfffu) << 48;
    return r;
  }

  RowSpan row(int i) const {
    uint64_t b = bits >> (6 * i);
    return {uint32_t(b & 7u), uint32_t((b >> 3) & 7u)};
  }

  uint32_t triangle_index() const { return uint32_t(bits >> 24) & 0xffffffu; }
  uint32_t prefix_sum() const { return uint32_t(bits >> 48) & 0xfffu; }

  bool operator==(const TriHalfBlock&) const = default;
};

// --- sort key: 22 high bits quantized depth, 10 low bits tri-block index ---

inline uint32_t make_sort_key(uint32_t quantized_depth, uint32_t tri_block_index) {
  return (quantized_depth << 10) | (tri_block_index & 0x3ffu);
}

inline uint32_t sort_key_depth(uint32_t key) { return key >> 10; }
inline uint32_t sort_key_index(uint32_t key) { return key & 0x3ffu; }

// Monotonic mapping of a depth value onto [0, 2^22 - 1]. Depths are NDC z
// in [0, 1]; values outside the range (unclipped fragments) clamp, and NaN
// maps to 0 so every fragment has a defined key.
inline uint32_t quantize_depth(double depth) {
  constexpr double kMax = 4194303.0;  // 2^22 - 1
  if (!(depth > 0.0)) return 0;
  if (depth >= 1.0) return uint32_t(kMax);
  return uint32_t(std::lround(depth * kMax));
}

}  // namespace veil
