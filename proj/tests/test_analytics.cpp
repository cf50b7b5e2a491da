// Copyright 2026 The topgrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <deque>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topgrid/analytics.hpp"

using namespace topgrid;

namespace {

const GridSpec kSpec{0.0, 0.0, 0.1, 12, 9};

BinaryMask block(const GridSpec& spec, int x0, int y0, int w, int h) {
  BinaryMask m = spec.empty_mask();
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) m.at(x, y) = 1;
  return m;
}

double mean_over(const Plane<float>& p, const BinaryMask& where) {
  double s = 0;
  int n = 0;
  for (std::size_t i = 0; i < p.pixel_count(); ++i)
    if (where[i]) {
      s += p[i];
      ++n;
    }
  return s / n;
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("a cell occupied every frame stays at one") {
  for (auto mode : {CumulativeMode::full_history, CumulativeMode::sliding}) {
    CumulativeGrid h(kSpec, mode, 3);
    BinaryMask m = kSpec.empty_mask();
    m.at(2, 2) = 1;
    for (int t = 0; t < 7; ++t) {
      h.update(m);
      CHECK(h.value(2, 2) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("sliding window of four over 1,0,1,0") {
  CumulativeGrid g(kSpec, CumulativeMode::sliding, 4);
  BinaryMask on = kSpec.empty_mask();
  on.at(5, 5) = 1;
  for (int t = 0; t < 4; ++t) g.update(t % 2 == 0 ? on : kSpec.empty_mask());
  CHECK(g.value(5, 5) == doctest::Approx(0.5));
}

TEST_CASE("sliding window of 100: enters fully and leaves fully") {
  CumulativeGrid g(kSpec, CumulativeMode::sliding, 100);
  BinaryMask on = kSpec.empty_mask();
  on.at(1, 1) = 1;
  for (int t = 0; t < 100; ++t) g.update(on);
  CHECK(g.value(1, 1) == doctest::Approx(1.0));
  for (int t = 0; t < 100; ++t) g.update(kSpec.empty_mask());
  CHECK(g.value(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("both modes match brute-force means") {
  std::mt19937_64 rng(31);
  for (int span : {4, 100}) {
    CumulativeGrid full(kSpec, CumulativeMode::full_history), sliding(kSpec, CumulativeMode::sliding, span);
    std::deque<BinaryMask> hist;
    for (int t = 0; t < 300; ++t) {
      const auto m = oracle::random_mask(kSpec.cols, kSpec.rows, 0.3, rng);
      hist.push_back(m);
      full.update(m);
      sliding.update(m);
      for (std::size_t i = 0; i < m.pixel_count(); ++i) {
        REQUIRE(std::abs(full.values()[i] - oracle::window_mean(hist, i, 1 << 30)) <= 1e-6);
        REQUIRE(std::abs(sliding.values()[i] - oracle::window_mean(hist, i, span)) <= 1e-6);
        REQUIRE(sliding.values()[i] >= 0.0);
        REQUIRE(sliding.values()[i] <= 1.0);
      }
    }
  }
}

TEST_CASE("cumulative grid validates its input") {
  CHECK_THROWS(CumulativeGrid(kSpec, CumulativeMode::sliding, 0));
  CumulativeGrid g(kSpec, CumulativeMode::sliding, 2);
  CHECK_THROWS_AS(g.update(BinaryMask(3, 3)), DimensionError);
}

TEST_CASE("topview_flow") {
  const GridSpec spec{0.0, 0.0, 0.1, 40, 30};
  const auto a = block(spec, 10, 10, 6, 6);
  const FlowParams p;
  const auto zero = topview_flow(a, a, p);
  for (std::size_t i = 0; i < zero.u.pixel_count(); ++i) {
    CHECK(std::abs(zero.u[i]) < 1e-6);
    CHECK(std::abs(zero.v[i]) < 1e-6);
  }

  const auto b = block(spec, 12, 10, 6, 6);
  const auto f = topview_flow(a, b, p);
  CHECK(std::abs(mean_over(f.u, b) - 2.0) <= 0.3);
  CHECK(std::abs(mean_over(f.v, b)) <= 0.3);

  BinaryMask p0 = block(spec, 5, 5, 6, 6), p1 = block(spec, 7, 5, 6, 6);
  BinaryMask q0 = block(spec, 28, 18, 6, 6), q1 = block(spec, 26, 18, 6, 6);
  for (std::size_t i = 0; i < p0.pixel_count(); ++i) {
    p0[i] |= q0[i];
    p1[i] |= q1[i];
  }
  const auto g = topview_flow(p0, p1, p);
  CHECK(mean_over(g.u, block(spec, 7, 5, 6, 6)) > 0.0);
  CHECK(mean_over(g.u, block(spec, 26, 18, 6, 6)) < 0.0);
}

TEST_CASE("saturation_query") {
  CumulativeGrid g(kSpec, CumulativeMode::sliding, 10);
  g.update(kSpec.empty_mask());
  auto rep = saturation_query(g, 0.8, 1);
  CHECK(rep.cells.empty());
  CHECK(rep.clusters.empty());

  CumulativeGrid one(kSpec, CumulativeMode::sliding, 10);
  BinaryMask m = kSpec.empty_mask();
  m.at(3, 4) = 1;
  one.update(m);
  rep = saturation_query(one, 0.8, 1);
  REQUIRE(rep.clusters.size() == 1);
  CHECK(rep.clusters[0].area == 1);
  CHECK(rep.clusters[0].centroid_col == 3.0);
  CHECK(rep.clusters[0].centroid_row == 4.0);
  CHECK(rep.clusters[0].centroid_world.x == doctest::Approx(0.35));
  CHECK(rep.clusters[0].centroid_world.y == doctest::Approx(0.45));
  CHECK(saturation_query(one, 0.8, 2).clusters.empty());
  CHECK_THROWS(saturation_query(one, 0.0, 1));
}

}  // TEST_SUITE
