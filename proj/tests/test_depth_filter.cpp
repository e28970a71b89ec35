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
#include <random>
#include <vector>

#include "veil/depth_filter.hpp"

using namespace veil;

namespace {

struct Emission {
  uint64_t key;
  bool out_of_order;
};

// Runs the full push/flush protocol and records every emission.
std::vector<Emission> run_filter(int capacity, const std::vector<uint64_t>& keys) {
  DepthFilter filter(capacity);
  std::vector<Emission> emissions;
  for (uint64_t key : keys) {
    bool out_of_order = false;
    if (auto e = filter.push(key, {}, &out_of_order))
      emissions.push_back({e->key, out_of_order});
  }
  filter.flush([&](const DepthFilter::Entry& e, bool out_of_order) {
    emissions.push_back({e.key, out_of_order});
  });
  return emissions;
}

}  // namespace

TEST_CASE("disorder within the window flushes in order") {
  auto emissions = run_filter(3, {3, 1, 2});
  REQUIRE(emissions.size() == 3);
  CHECK(emissions[0].key == 1);
  CHECK(emissions[1].key == 2);
  CHECK(emissions[2].key == 3);
  for (const auto& e : emissions) CHECK(!e.out_of_order);
}

TEST_CASE("overflow pops the minimum") {
  DepthFilter filter(3);
  bool out_of_order = false;
  CHECK(!filter.push(1, {}, &out_of_order));
  CHECK(!filter.push(2, {}, &out_of_order));
  CHECK(!filter.push(3, {}, &out_of_order));
  auto e = filter.push(4, {}, &out_of_order);
  REQUIRE(e);
  CHECK(e->key == 1);
  CHECK(!out_of_order);
}

TEST_CASE("hand-traced invalid detection: 2,3,4,5,1 at k=3") {
  DepthFilter filter(3);
  bool out_of_order = false;
  CHECK(!filter.push(2, {}, &out_of_order));
  CHECK(!filter.push(3, {}, &out_of_order));
  CHECK(!filter.push(4, {}, &out_of_order));

  auto first = filter.push(5, {}, &out_of_order);
  REQUIRE(first);
  CHECK(first->key == 2);
  CHECK(!out_of_order);

  // 1 is now the minimum and commits behind the already blended 2.
  auto second = filter.push(1, {}, &out_of_order);
  REQUIRE(second);
  CHECK(second->key == 1);
  CHECK(out_of_order);

  std::vector<Emission> rest;
  filter.flush([&](const DepthFilter::Entry& e, bool ooo) { rest.push_back({e.key, ooo}); });
  REQUIRE(rest.size() == 3);
  CHECK(rest[0].key == 3);
  CHECK(rest[1].key == 4);
  CHECK(rest[2].key == 5);
  for (const auto& e : rest) CHECK(!e.out_of_order);
}

TEST_CASE("sequences with disorder <= capacity emit fully sorted") {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    int n = 1 + int(rng() % 64);
    int k = 1 + int(rng() % 8);
    // Start sorted, then displace elements at most k positions.
    std::vector<uint64_t> keys(n);
    for (int i = 0; i < n; ++i) keys[i] = uint64_t(i) * 10;
    for (int i = 0; i < n; ++i) {
      int j = std::min(n - 1, i + int(rng() % uint64_t(k + 1)));
      std::swap(keys[i], keys[j]);
    }
    // Verify the lateness bound actually holds for the scrambled input.
    std::vector<uint64_t> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    int max_late = 0;
    for (int i = 0; i < n; ++i) {
      int pos = int(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());
      max_late = std::max(max_late, i - pos);
    }
    if (max_late > k) continue;

    auto emissions = run_filter(k, keys);
    REQUIRE(emissions.size() == keys.size());
    for (size_t i = 0; i < emissions.size(); ++i) {
      CHECK(emissions[i].key == sorted[i]);
      CHECK(!emissions[i].out_of_order);
    }
  }
}

TEST_CASE("pop always returns the minimum pending entry") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    int n = 1 + int(rng() % 100);
    std::vector<uint64_t> keys;
    for (int i = 0; i < n; ++i) keys.push_back(rng() % 1000000);
    // Unique keys keep the expected order total.
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::shuffle(keys.begin(), keys.end(), rng);

    // With capacity >= n nothing pops early and flush is fully sorted.
    auto emissions = run_filter(int(keys.size()), keys);
    std::vector<uint64_t> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(emissions.size() == sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) CHECK(emissions[i].key == sorted[i]);
  }
}
