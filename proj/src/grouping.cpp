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

#include "veil/grouping.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "veil/error.hpp"

namespace veil {

QuadCandidateGraph build_candidate_graph(std::span<const TriangleRef> triangles) {
  QuadCandidateGraph graph;

  // Edge -> incident triangles.
  std::map<std::pair<uint32_t, uint32_t>, std::vector<uint32_t>> edge_tris;
  for (uint32_t t = 0; t < triangles.size(); ++t) {
    const TriangleRef& tri = triangles[t];
    if (tri.v[0] == tri.v[1] || tri.v[1] == tri.v[2] || tri.v[0] == tri.v[2]) continue;
    for (int e = 0; e < 3; ++e) {
      uint32_t a = tri.v[e], b = tri.v[(e + 1) % 3];
      edge_tris[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  }

  // Count shared edges per triangle pair; a candidate shares exactly one.
  std::map<std::pair<uint32_t, uint32_t>, std::pair<uint32_t, std::pair<uint32_t, uint32_t>>>
      pair_info;  // (tri pair) -> (shared edge count, one shared edge)
  for (const auto& [edge, tris] : edge_tris) {
    for (size_t i = 0; i < tris.size(); ++i) {
      for (size_t j = i + 1; j < tris.size(); ++j) {
        auto key = std::minmax(tris[i], tris[j]);
        auto& info = pair_info[{key.first, key.second}];
        ++info.first;
        info.second = edge;
      }
    }
  }

  for (const auto& [pair, info] : pair_info) {
    if (info.first != 1) continue;  // pairs sharing 2+ edges are not candidates
    if (triangles[pair.first].material_id != triangles[pair.second].material_id) continue;
    QuadCandidate cand;
    cand.tri[0] = pair.first;
    cand.tri[1] = pair.second;
    cand.shared[0] = info.second.first;
    cand.shared[1] = info.second.second;
    graph.nodes.push_back(cand);
  }

  // Adjacency: candidates conflict when they share a triangle.
  std::map<uint32_t, std::vector<uint32_t>> by_triangle;
  for (uint32_t n = 0; n < graph.nodes.size(); ++n) {
    by_triangle[graph.nodes[n].tri[0]].push_back(n);
    by_triangle[graph.nodes[n].tri[1]].push_back(n);
  }
  graph.adjacency.resize(graph.nodes.size());
  for (const auto& [tri, nodes] : by_triangle) {
    for (size_t i = 0; i < nodes.size(); ++i) {
      for (size_t j = i + 1; j < nodes.size(); ++j) {
        graph.adjacency[nodes[i]].push_back(nodes[j]);
        graph.adjacency[nodes[j]].push_back(nodes[i]);
      }
    }
  }
  return graph;
}

namespace {

// Quad (v0,v1,v2,v3) whose triangles (v0,v1,v2)/(v0,v2,v3) reproduce the
// pair exactly: the shared edge becomes the diagonal and the first
// triangle's winding is preserved.
Quad quad_from_pair(const TriangleRef& a, const TriangleRef& b, const uint32_t shared[2]) {
  auto is_shared = [&](uint32_t v) { return v == shared[0] || v == shared[1]; };
  int unshared_a = 0;
  while (is_shared(a.v[unshared_a])) ++unshared_a;
  int unshared_b = 0;
  while (is_shared(b.v[unshared_b])) ++unshared_b;

  Quad q;
  q.v[0] = a.v[(unshared_a + 2) % 3];
  q.v[1] = a.v[unshared_a];
  q.v[2] = a.v[(unshared_a + 1) % 3];
  q.v[3] = b.v[unshared_b];
  q.material_id = a.material_id;
  return q;
}

}  // namespace

std::vector<Quad> greedy_mis_pairing(const QuadCandidateGraph& graph,
                                     std::span<const TriangleRef> triangles,
                                     GroupingStats* stats) {
  std::vector<uint32_t> order(graph.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
    size_t dx = graph.adjacency[x].size(), dy = graph.adjacency[y].size();
    if (dx != dy) return dx < dy;
    const QuadCandidate& cx = graph.nodes[x];
    const QuadCandidate& cy = graph.nodes[y];
    if (cx.tri[0] != cy.tri[0]) return cx.tri[0] < cy.tri[0];
    return cx.tri[1] < cy.tri[1];
  });

  std::vector<int32_t> pair_of(triangles.size(), -1);  // triangle -> selected node
  for (uint32_t n : order) {
    const QuadCandidate& cand = graph.nodes[n];
    if (pair_of[cand.tri[0]] >= 0 || pair_of[cand.tri[1]] >= 0) continue;
    pair_of[cand.tri[0]] = int32_t(n);
    pair_of[cand.tri[1]] = int32_t(n);
  }

  // Emit in first-triangle order; unpaired triangles become degenerate quads.
  std::vector<Quad> quads;
  GroupingStats out;
  for (uint32_t t = 0; t < triangles.size(); ++t) {
    int32_t n = pair_of[t];
    if (n >= 0) {
      const QuadCandidate& cand = graph.nodes[n];
      if (cand.tri[0] != t) continue;  // emitted at the pair's first triangle
      quads.push_back(quad_from_pair(triangles[cand.tri[0]], triangles[cand.tri[1]],
                                     cand.shared));
    } else {
      Quad q;
      q.v[0] = triangles[t].v[0];
      q.v[1] = triangles[t].v[1];
      q.v[2] = triangles[t].v[2];
      q.v[3] = triangles[t].v[2];
      q.material_id = triangles[t].material_id;
      quads.push_back(q);
      ++out.degenerate;
    }
    ++out.quads;
  }
  if (stats) *stats = out;
  return quads;
}

GroupingStats group_scene_quads(Scene* scene) {
  std::vector<TriangleRef> triangles;
  triangles.reserve(scene->quads.size());
  for (const Quad& q : scene->quads) {
    uint32_t t0[3], t1[3];
    quad_triangle(q, 0, t0);
    quad_triangle(q, 1, t1);
    bool d0 = triangle_degenerate(t0), d1 = triangle_degenerate(t1);
    if (!d0 && !d1)
      throw Error(ErrorCode::invalid_argument,
                  "--group-quads requires a pure triangle mesh (quads already present)");
    const uint32_t* live = d0 ? t1 : t0;
    if (d0 && d1) continue;  // fully degenerate quad carries no triangle
    TriangleRef ref;
    ref.v[0] = live[0];
    ref.v[1] = live[1];
    ref.v[2] = live[2];
    ref.material_id = q.material_id;
    triangles.push_back(ref);
  }
  QuadCandidateGraph graph = build_candidate_graph(triangles);
  GroupingStats stats;
  scene->quads = greedy_mis_pairing(graph, triangles, &stats);
  return stats;
}

}  // namespace veil
