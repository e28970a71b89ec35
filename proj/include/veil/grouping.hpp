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
// Greedy maximal-independent-set pairing of triangles into quads. Candidate
// quads (triangle pairs sharing exactly one edge) are graph nodes; nodes
// conflict when they share a triangle. Candidates are processed in
// ascending degree, ties by lowest triangle index.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "veil/scene.hpp"

namespace veil {

struct TriangleRef {
  uint32_t v[3]{};
  uint32_t material_id = 0;
};

struct QuadCandidate {
  uint32_t tri[2]{};     // triangle indices, tri[0] < tri[1]
  uint32_t shared[2]{};  // vertex indices of the shared edge
};

struct QuadCandidateGraph {
  std::vector<QuadCandidate> nodes;
  std::vector<std::vector<uint32_t>> adjacency;  // nodes sharing a triangle
};

// One node per unordered pair of triangles that share exactly one edge and
// the same material.
QuadCandidateGraph build_candidate_graph(std::span<const TriangleRef> triangles);

struct GroupingStats {
  uint64_t quads = 0;
  uint64_t degenerate = 0;

  double degenerate_percent() const {
    return quads ? 100.0 * double(degenerate) / double(quads) : 0.0;
  }
};

// Selects an independent, maximal set of candidates; unpaired triangles
// become degenerate quads. Every input triangle lands in exactly one quad.
std::vector<Quad> greedy_mis_pairing(const QuadCandidateGraph& graph,
                                     std::span<const TriangleRef> triangles,
                                     GroupingStats* stats);

// Regroups a pure triangle mesh (all quads degenerate) in place; throws
// invalid_argument when the scene already contains paired quads.
GroupingStats group_scene_quads(Scene* scene);

}  // namespace veil
