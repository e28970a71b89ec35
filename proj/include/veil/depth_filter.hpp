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
// Fixed-capacity pending-sample queue that repairs bounded local disorder
// in the fragment stream before front-to-back blending. Entries are ordered
// by a composite key (quantized depth, visible triangle index) - the same
// total order the reference renderer sorts by, which makes a repaired
// stream blend bit-identically to the reference.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "veil/math.hpp"

namespace veil {

class DepthFilter {
 public:
  struct Entry {
    uint64_t key = 0;
    Vec4f color{};
  };

  explicit DepthFilter(int capacity) : capacity_(capacity) {}

  int capacity() const { return capacity_; }
  size_t size() const { return entries_.size(); }

  void reset() {
    entries_.clear();
    max_blended_key_ = 0;
    any_blended_ = false;
  }

  // Inserts the sample. When the queue exceeds its capacity the minimum-key
  // entry falls out and is returned for blending; *out_of_order is set when
  // that entry commits behind an already blended one.
  std::optional<Entry> push(uint64_t key, Vec4f color, bool* out_of_order) {
    insert(key, color);
    *out_of_order = false;
    if (int(entries_.size()) <= capacity_) return std::nullopt;
    return pop_min(out_of_order);
  }

  // Emits remaining entries in ascending key order. emit(entry, out_of_order).
  template <typename Emit>
  void flush(Emit&& emit) {
    while (!entries_.empty()) {
      bool out_of_order = false;
      Entry e = *pop_min(&out_of_order);
      emit(e, out_of_order);
    }
  }

  void discard_pending() { entries_.clear(); }

 private:
  void insert(uint64_t key, Vec4f color) {
    // Kept sorted descending so the minimum is at the back.
    auto it = entries_.begin();
    while (it != entries_.end() && it->key > key) ++it;
    entries_.insert(it, Entry{key, color});
  }

  std::optional<Entry> pop_min(bool* out_of_order) {
    Entry e = entries_.back();
    entries_.pop_back();
    *out_of_order = any_blended_ && e.key < max_blended_key_;
    if (!any_blended_ || e.key > max_blended_key_) max_blended_key_ = e.key;
    any_blended_ = true;
    return e;
  }

  int capacity_;
  std::vector<Entry> entries_;
  uint64_t max_blended_key_ = 0;
  bool any_blended_ = false;
};

}  // namespace veil
