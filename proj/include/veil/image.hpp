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
#include <vector>

namespace veil {

// Row-major interleaved RGBA8 image.
struct Image8 {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> rgba;

  Image8() = default;
  Image8(int w, int h) : width(w), height(h), rgba(size_t(w) * h * 4, 0) {}

  uint8_t* pixel(int x, int y) { return rgba.data() + (size_t(y) * width + x) * 4; }
  const uint8_t* pixel(int x, int y) const { return rgba.data() + (size_t(y) * width + x) * 4; }

  bool operator==(const Image8&) const = default;
};

Image8 load_png(const std::string& path);
void save_png(const Image8& image, const std::string& path);

}  // namespace veil
