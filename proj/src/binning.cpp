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

#include "veil/binning.hpp"

#include <algorithm>

#include "veil/error.hpp"
#include "veil/thread_pool.hpp"

namespace veil {

std::vector<uint32_t> compute_offsets(std::span<const uint32_t> counts) {
  std::vector<uint32_t> offsets(counts.size());
  uint32_t sum = 0;
  for (size_t i = 0; i < counts.size(); ++i) {
    offsets[i] = sum;
    sum += counts[i];
  }
  return offsets;
}

BinCategory categorize_bin(uint32_t triangle_equivalents) {
  if (triangle_equivalents == 0) return BinCategory::empty;
  return triangle_equivalents < kHighBinTriangleThreshold ? BinCategory::low : BinCategory::high;
}

namespace {

constexpr size_t kQuadBatch = 1024;

// Phase-1 snapshot of one batch: touched bins in first-touch order with
// per-bin counts. The write pass reserves slots from the same snapshot, so
// placement is independent of which worker processed the batch.
struct BatchCounts {
  std::vector<std::pair<uint32_t, uint32_t>> bins;
};

// Dense per-worker scratch, reset between batches via the touched list.
struct WorkerScratch {
  std::vector<uint32_t> dense;
  std::vector<uint32_t> touched;

  void init(size_t bin_count) { dense.assign(bin_count, 0); }

  void count(uint32_t bin) {
    if (dense[bin]++ == 0) touched.push_back(bin);
  }

  BatchCounts take() {
    BatchCounts out;
    out.bins.reserve(touched.size());
    for (uint32_t bin : touched) {
      out.bins.emplace_back(bin, dense[bin]);
      dense[bin] = 0;
    }
    touched.clear();
    return out;
  }
};

}  // namespace

BinGrid run_binning(const SetupOutput& setup, int width, int height, ThreadPool& pool) {
  BinGrid grid;
  grid.bins_x = (width + kBinSize - 1) / kBinSize;
  grid.bins_y = (height + kBinSize - 1) / kBinSize;
  const size_t bin_count = size_t(grid.bins_x) * grid.bins_y;
  if (bin_count > kMaxBins) throw Error(ErrorCode::capacity, "bin grid exceeds 5120 bins");

  // Visible primitives split into small quads and large triangles.
  std::vector<uint32_t> small_quads;
  std::vector<uint32_t> large_tris;
  for (size_t q = 0; q < setup.quads.size(); ++q) {
    if (setup.quads[q].size_class == SizeClass::small) {
      small_quads.push_back(uint32_t(q));
    } else {
      for (int t = 0; t < 2; ++t) {
        uint32_t tri = uint32_t(q) * 2 + uint32_t(t);
        if (setup.triangles[tri].valid) large_tris.push_back(tri);
      }
    }
  }

  // Quad batches of 1024; triangle batches sized by worker count (large
  // triangles are few but expensive).
  const size_t tri_batch = std::max<size_t>(1, size_t(pool.worker_count()));
  const size_t quad_batches = (small_quads.size() + kQuadBatch - 1) / kQuadBatch;
  const size_t tri_batches = (large_tris.size() + tri_batch - 1) / tri_batch;
  const size_t total_batches = quad_batches + tri_batches;

  std::vector<WorkerScratch> scratch(pool.worker_count());
  for (auto& s : scratch) s.init(bin_count);

  auto for_each_in_batch = [&](size_t batch, auto&& bin_sink) {
    if (batch < quad_batches) {
      size_t begin = batch * kQuadBatch;
      size_t end = std::min(begin + kQuadBatch, small_quads.size());
      for (size_t i = begin; i < end; ++i)
        small_quad_bins(setup.quads[small_quads[i]],
                        [&](int bx, int by) { bin_sink(grid.bin_index(bx, by), small_quads[i]); });
    } else {
      size_t begin = (batch - quad_batches) * tri_batch;
      size_t end = std::min(begin + tri_batch, large_tris.size());
      for (size_t i = begin; i < end; ++i)
        rasterize_triangle_bins(setup.triangles[large_tris[i]], width, height,
                                [&](int bx, int by) {
                                  bin_sink(grid.bin_index(bx, by), large_tris[i]);
                                });
    }
  };

  // Phase 1: counting.
  std::vector<BatchCounts> batch_counts(total_batches);
  pool.parallel_for(total_batches, [&](size_t batch, int worker) {
    WorkerScratch& s = scratch[worker];
    for_each_in_batch(batch, [&](int bin, uint32_t) { s.count(uint32_t(bin)); });
    batch_counts[batch] = s.take();
  });

  grid.quad_counts.assign(bin_count, 0);
  grid.tri_counts.assign(bin_count, 0);
  for (size_t batch = 0; batch < total_batches; ++batch) {
    auto& counts = batch < quad_batches ? grid.quad_counts : grid.tri_counts;
    for (auto [bin, n] : batch_counts[batch].bins) counts[bin] += n;
  }

  // Phase 2: offsets over combined counts, then bin categories.
  std::vector<uint32_t> combined(bin_count);
  for (size_t b = 0; b < bin_count; ++b) combined[b] = grid.quad_counts[b] + grid.tri_counts[b];
  grid.offsets = compute_offsets(combined);
  grid.categories.resize(bin_count);
  for (size_t b = 0; b < bin_count; ++b)
    grid.categories[b] = categorize_bin(grid.triangle_equivalents(int(b)));

  // Reserve per-batch write cursors: quads precede triangles within a bin
  // and each group follows batch order, i.e. ascending primitive index.
  std::vector<std::vector<uint32_t>> batch_cursors(total_batches);
  {
    std::vector<uint32_t> next(bin_count);
    for (size_t b = 0; b < bin_count; ++b) next[b] = grid.offsets[b];
    for (size_t batch = 0; batch < quad_batches; ++batch) {
      for (auto [bin, n] : batch_counts[batch].bins) {
        batch_cursors[batch].push_back(next[bin]);
        next[bin] += n;
      }
    }
    for (size_t b = 0; b < bin_count; ++b) next[b] = grid.offsets[b] + grid.quad_counts[b];
    for (size_t batch = quad_batches; batch < total_batches; ++batch) {
      for (auto [bin, n] : batch_counts[batch].bins) {
        batch_cursors[batch].push_back(next[bin]);
        next[bin] += n;
      }
    }
  }

  const uint32_t total = bin_count ? grid.offsets.back() + combined.back() : 0;
  grid.items.assign(total, 0);

  // Phase 3: write pass over the same batches.
  pool.parallel_for(total_batches, [&](size_t batch, int worker) {
    WorkerScratch& s = scratch[worker];
    const BatchCounts& counts = batch_counts[batch];
    // dense[bin] = next write slot for this batch.
    for (size_t k = 0; k < counts.bins.size(); ++k)
      s.dense[counts.bins[k].first] = batch_cursors[batch][k];
    for_each_in_batch(batch,
                      [&](int bin, uint32_t prim) { grid.items[s.dense[bin]++] = prim; });
    for (size_t k = 0; k < counts.bins.size(); ++k) {
      auto [bin, n] = counts.bins[k];
      if (s.dense[bin] != batch_cursors[batch][k] + n)
        throw Error(ErrorCode::internal, "binning: counted and written totals differ");
      s.dense[bin] = 0;
    }
  });

  return grid;
}

}  // namespace veil
