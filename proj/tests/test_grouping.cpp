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

#include <map>
#include <random>
#include <set>

#include "veil/grouping.hpp"

using namespace veil;

namespace {

TriangleRef tri(uint32_t a, uint32_t b, uint32_t c) {
  TriangleRef t;
  t.v[0] = a;
  t.v[1] = b;
  t.v[2] = c;
  return t;
}

void check_invariants(const std::vector<Quad>& quads, std::span<const TriangleRef> tris,
                      const QuadCandidateGraph& graph) {
  // Coverage + independence: every triangle appears in exactly one quad.
  std::map<std::multiset<uint32_t>, int> tri_sets;
  size_t live = 0;
  for (const Quad& q : quads) {
    uint32_t t0[3], t1[3];
    quad_triangle(q, 0, t0);
    quad_triangle(q, 1, t1);
    if (!triangle_degenerate(t0)) {
      ++tri_sets[{t0[0], t0[1], t0[2]}];
      ++live;
    }
    if (!triangle_degenerate(t1)) {
      ++tri_sets[{t1[0], t1[1], t1[2]}];
      ++live;
    }
  }
  CHECK(live == tris.size());
  for (const TriangleRef& t : tris) {
    auto it = tri_sets.find({t.v[0], t.v[1], t.v[2]});
    REQUIRE(it != tri_sets.end());
  }

  // Maximality: every candidate pair has at least one triangle that ended
  // up inside a real (non-degenerate) quad.
  std::set<uint32_t> paired;
  for (const Quad& q : quads) {
    if (q.is_degenerate()) continue;
    // Recover the pair from vertex sets.
    for (uint32_t t = 0; t < tris.size(); ++t) {
      std::multiset<uint32_t> s{tris[t].v[0], tris[t].v[1], tris[t].v[2]};
      uint32_t q0[3], q1[3];
      quad_triangle(q, 0, q0);
      quad_triangle(q, 1, q1);
      if (s == std::multiset<uint32_t>{q0[0], q0[1], q0[2]} ||
          s == std::multiset<uint32_t>{q1[0], q1[1], q1[2]})
        paired.insert(t);
    }
  }
  for (const QuadCandidate& cand : graph.nodes) {
    bool conflicted = paired.count(cand.tri[0]) || paired.count(cand.tri[1]);
    CHECK(conflicted);
  }
}

}  // namespace

TEST_CASE("two triangles sharing an edge form one candidate and one quad") {
  std::vector<TriangleRef> tris = {tri(0, 1, 2), tri(0, 2, 3)};
  QuadCandidateGraph graph = build_candidate_graph(tris);
  REQUIRE(graph.nodes.size() == 1);
  CHECK(graph.adjacency[0].empty());

  GroupingStats stats;
  std::vector<Quad> quads = greedy_mis_pairing(graph, tris, &stats);
  REQUIRE(quads.size() == 1);
  CHECK(!quads[0].is_degenerate());
  CHECK(stats.degenerate_percent() == 0.0);

  // The quad's triangles reproduce the originals exactly.
  uint32_t t0[3], t1[3];
  quad_triangle(quads[0], 0, t0);
  quad_triangle(quads[0], 1, t1);
  CHECK(std::multiset<uint32_t>{t0[0], t0[1], t0[2]} == std::multiset<uint32_t>{0, 1, 2});
  CHECK(std::multiset<uint32_t>{t1[0], t1[1], t1[2]} == std::multiset<uint32_t>{0, 2, 3});
}

TEST_CASE("lone triangle becomes a degenerate quad") {
  std::vector<TriangleRef> tris = {tri(0, 1, 2)};
  QuadCandidateGraph graph = build_candidate_graph(tris);
  CHECK(graph.nodes.empty());
  GroupingStats stats;
  std::vector<Quad> quads = greedy_mis_pairing(graph, tris, &stats);
  REQUIRE(quads.size() == 1);
  CHECK(quads[0].is_degenerate());
  CHECK(stats.degenerate_percent() == 100.0);
}

TEST_CASE("chain of three triangles: two nodes, one edge") {
  // B shares an edge with A and with C.
  std::vector<TriangleRef> tris = {tri(0, 1, 2), tri(1, 2, 3), tri(2, 3, 4)};
  QuadCandidateGraph graph = build_candidate_graph(tris);
  REQUIRE(graph.nodes.size() == 2);
  CHECK(graph.adjacency[0].size() == 1);
  CHECK(graph.adjacency[1].size() == 1);
}

TEST_CASE("strip of four triangles pairs perfectly") {
  std::vector<TriangleRef> tris = {tri(0, 1, 2), tri(1, 2, 3)};
  // Extend to a strip A-B-C-D sharing consecutive edges.
  tris = {tri(0, 1, 2), tri(2, 1, 3), tri(2, 3, 4), tri(4, 3, 5)};
  QuadCandidateGraph graph = build_candidate_graph(tris);
  REQUIRE(graph.nodes.size() == 3);  // (A,B), (B,C), (C,D)
  GroupingStats stats;
  std::vector<Quad> quads = greedy_mis_pairing(graph, tris, &stats);
  CHECK(quads.size() == 2);
  CHECK(stats.degenerate == 0);
  check_invariants(quads, tris, graph);
}

TEST_CASE("winding of both reproduced triangles matches the originals") {
  // Consistently wound pair: A traverses the shared edge 2->0, B 0->2.
  std::vector<TriangleRef> tris = {tri(0, 1, 2), tri(0, 2, 3)};
  QuadCandidateGraph graph = build_candidate_graph(tris);
  GroupingStats stats;
  std::vector<Quad> quads = greedy_mis_pairing(graph, tris, &stats);
  REQUIRE(quads.size() == 1);
  uint32_t t0[3], t1[3];
  quad_triangle(quads[0], 0, t0);
  quad_triangle(quads[0], 1, t1);
  auto same_cycle = [](const uint32_t a[3], const TriangleRef& b) {
    for (int r = 0; r < 3; ++r)
      if (a[0] == b.v[r] && a[1] == b.v[(r + 1) % 3] && a[2] == b.v[(r + 2) % 3]) return true;
    return false;
  };
  CHECK((same_cycle(t0, tris[0]) || same_cycle(t1, tris[0])));
  CHECK((same_cycle(t0, tris[1]) || same_cycle(t1, tris[1])));
}

TEST_CASE("regular grid meshes pair with zero degeneracy") {
  for (int cols : {1, 7, 16}) {
    for (int rows : {1, 5, 16}) {
      std::vector<TriangleRef> tris;
      auto vid = [&](int x, int y) { return uint32_t(y * (cols + 1) + x); };
      for (int y = 0; y < rows; ++y) {
        for (int x = 0; x < cols; ++x) {
          tris.push_back(tri(vid(x, y), vid(x + 1, y), vid(x + 1, y + 1)));
          tris.push_back(tri(vid(x, y), vid(x + 1, y + 1), vid(x, y + 1)));
        }
      }
      QuadCandidateGraph graph = build_candidate_graph(tris);
      GroupingStats stats;
      std::vector<Quad> quads = greedy_mis_pairing(graph, tris, &stats);
      INFO("grid " << cols << "x" << rows);
      CHECK(stats.degenerate == 0);
      CHECK(quads.size() == tris.size() / 2);
      check_invariants(quads, tris, graph);
    }
  }
}

TEST_CASE("grouping is deterministic") {
  std::vector<TriangleRef> tris;
  std::mt19937_64 rng(5);
  auto vid = [&](int x, int y) { return uint32_t(y * 33 + x); };
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) {
      if (rng() % 5 == 0) continue;  // holes make the graph irregular
      tris.push_back(tri(vid(x, y), vid(x + 1, y), vid(x + 1, y + 1)));
      tris.push_back(tri(vid(x, y), vid(x + 1, y + 1), vid(x, y + 1)));
    }
  QuadCandidateGraph graph = build_candidate_graph(tris);
  GroupingStats s1, s2;
  std::vector<Quad> a = greedy_mis_pairing(graph, tris, &s1);
  std::vector<Quad> b = greedy_mis_pairing(graph, tris, &s2);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 4; ++k) CHECK(a[i].v[k] == b[i].v[k]);
}
