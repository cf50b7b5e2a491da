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
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topgrid/geometry.hpp"
#include "topgrid/imaging.hpp"
#include "topgrid/synthgen.hpp"

using namespace topgrid;

namespace {

std::vector<PointPair> pairs_through(const Mat3& h, const std::vector<Vec2>& pts) {
  std::vector<PointPair> out;
  for (const auto& p : pts) out.push_back({p, oracle::map_point(h, p)});
  return out;
}

std::vector<Vec2> random_points(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x(0.0, 640.0), y(0.0, 480.0);
  std::vector<Vec2> pts;
  for (int i = 0; i < n; ++i) pts.push_back({x(rng), y(rng)});
  return pts;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("homography_from_points: identity and translation") {
  const std::vector<Vec2> sq{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  std::vector<PointPair> id, tr;
  for (const auto& p : sq) {
    id.push_back({p, p});
    tr.push_back({p, {p.x + 5, p.y + 7}});
  }
  const Mat3 want_t{1, 0, 5, 0, 1, 7, 0, 0, 1};
  CHECK(oracle::max_normalised_diff(homography_from_points(id).h.matrix(), kIdentity3) < 1e-9);
  CHECK(oracle::max_normalised_diff(homography_from_points(tr).h.matrix(), want_t) < 1e-9);
}

TEST_CASE("homography_from_points recovers random homographies from 8 points") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3 h = oracle::random_homography(rng);
    const auto fit = homography_from_points(pairs_through(h, random_points(8, rng)));
    CHECK(oracle::max_normalised_diff(fit.h.matrix(), h) < 1e-6);
  }
}

TEST_CASE("homography_from_points rejects too few points") {
  CHECK_THROWS(homography_from_points({{{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{0, 1}, {0, 1}}}));
}

TEST_CASE("apply_homography") {
  CHECK(apply_homography(Homography(kIdentity3), {3.5, 2.0}) == Vec2{3.5, 2.0});
  const Vec2 t = apply_homography(Homography({1, 0, 5, 0, 1, 7, 0, 0, 1}), {0, 0});
  CHECK(t.x == doctest::Approx(5.0));
  CHECK(t.y == doctest::Approx(7.0));

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const Homography h(oracle::random_homography(rng));
    const Vec2 p = random_points(1, rng)[0];
    const Vec2 back = h.inverse().apply(h.apply(p));
    // the forward map lands on meters; the return trip is in pixels
    const Vec2 w = h.apply(p), w2 = h.apply(back);
    CHECK(std::hypot(w.x - w2.x, w.y - w2.y) < 1e-9);
  }
  // w = x + 1 vanishes on the line x = -1
  CHECK_THROWS_AS(Homography({1, 0, 0, 0, 1, 0, 1, 0, 1}).apply({-1, 0}), UnmappableError);
  CHECK_THROWS_AS(Homography({1, 2, 3, 2, 4, 6, 0, 0, 1}), CalibrationError);
}

TEST_CASE("warp_mask_to_grid") {
  GridSpec spec{0.0, 0.0, 1.0, 40, 30};
  CHECK(warp_mask_to_grid(BinaryMask(40, 30), Homography(kIdentity3), spec) == spec.empty_mask());
  BinaryMask m(40, 30);
  m.at(10, 20) = 1;
  const auto g = warp_mask_to_grid(m, Homography(kIdentity3), spec);
  CHECK(g.at(10, 20) == 1);
}

TEST_CASE("warp_mask_to_grid of a rendered 1 m disc overlaps its footprint") {
  synth::Scenario s;
  s.name = "disc";
  s.noise_sigma = 0.0;
  s.frame_count = 1;
  synth::Agent disc;
  disc.radius = 0.5;
  disc.height = 0.002;  // a flat disc on the floor
  disc.albedo = {0.1, 0.1, 0.1};
  disc.waypoints = {{10.0, 5.0, 0}};
  s.agents.push_back(disc);
  synth::CameraRig rig;
  rig.camera = synth::look_at({10.0, -1.0, 6.0}, {10.0, 5.0, 0.0}, {0, 0, 1}, 400.0, 320, 240);
  s.cameras.push_back(rig);
  const auto frame = std::get<ColorImage>(synth::render_frame(s, 0, 0));
  const auto bg = std::get<ColorImage>(synth::render_background(s, 0));
  const auto fg = color_absdiff_mask(frame, bg, 0.15f);
  const GridSpec spec = s.grid();
  const auto cells = warp_mask_to_grid(fg, rig.ground_homography(), spec);
  CHECK(oracle::iou(cells, synth::ground_truth_footprint(s, spec, 0)) > 0.6);
}

TEST_CASE("backproject_depth") {
  const PinholeCamera id(100, 100, 50, 50, kIdentity3, {0, 0, 0});
  const Vec3 a = backproject_depth(id, {50, 50}, 3.0);
  CHECK(a.x == doctest::Approx(0.0));
  CHECK(a.y == doctest::Approx(0.0));
  CHECK(a.z == doctest::Approx(3.0));
  const Vec3 b = backproject_depth(id, {150, 50}, 2.0);
  CHECK(b.x == doctest::Approx(2.0));
  CHECK(b.y == doctest::Approx(0.0));
  CHECK(b.z == doctest::Approx(2.0));
  CHECK_THROWS_AS(backproject_depth(id, {1, 1}, 0.0), UnmappableError);
}

TEST_CASE("project then backproject is the identity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ang(-3.0, 3.0), f(100, 1000), c(0, 400), t(-5, 5),
      p(-3, 3), d(1, 20);
  for (int trial = 0; trial < 500; ++trial) {
    const double fx = f(rng), fy = f(rng), cx = c(rng), cy = c(rng);
    const Mat3 r = oracle::rotation(ang(rng), ang(rng) / 2, ang(rng));
    const Vec3 tr{t(rng), t(rng), t(rng)};
    const PinholeCamera cam(fx, fy, cx, cy, r, tr);
    // a point straight in front of the camera, then moved to world coordinates
    const Vec3 pc{p(rng), p(rng), d(rng)};
    const Vec3 w = multiply(transpose(r), Vec3{pc.x - tr.x, pc.y - tr.y, pc.z - tr.z});
    const auto proj = oracle::project(fx, fy, cx, cy, r, tr, w);
    const Vec3 back = backproject_depth(cam, proj.pixel, proj.depth);
    CHECK(std::hypot(back.x - w.x, back.y - w.y, back.z - w.z) < 1e-9);
  }
}

TEST_CASE("pinhole camera validates its rotation") {
  const Mat3 skew{1, 0.1, 0, 0, 1, 0, 0, 0, 1};
  CHECK_THROWS_AS(PinholeCamera(100, 100, 0, 0, skew, {}), CalibrationError);
  const Mat3 flip{1, 0, 0, 0, 1, 0, 0, 0, -1};
  CHECK_THROWS_AS(PinholeCamera(100, 100, 0, 0, flip, {}), CalibrationError);
  CHECK_THROWS_AS(PinholeCamera(0, 100, 0, 0, kIdentity3, {}), CalibrationError);
}

TEST_CASE("depth_mask_to_grid") {
  const PinholeCamera cam(100, 100, 32, 24, kIdentity3, {0, 0, 0});
  const GridSpec spec{-2.0, -0.05, 0.1, 40, 60};
  DepthImage invalid{Plane<float>(64, 48, 0.0f), 5.0f};
  BinaryMask all(64, 48, 1);
  CHECK(depth_mask_to_grid(invalid, all, cam, spec) == spec.empty_mask());

  DepthImage wall{Plane<float>(64, 48, 0.0f), 5.0f};
  for (int y = 10; y < 30; ++y)
    for (int x = 12; x < 52; ++x) wall.range.at(x, y) = 3.0f;
  const auto g = depth_mask_to_grid(wall, all, cam, spec);
  int marked = 0;
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c)
      if (g.at(c, r)) {
        ++marked;
        CHECK(r == 30);
      }
  CHECK(marked > 0);
}

TEST_CASE("depth_mask_to_grid of a rendered cylinder centres on its axis") {
  synth::Scenario s;
  s.name = "pole";
  s.up = synth::UpAxis::y_up;
  s.ground_min = {-3.0, 0.0};
  s.ground_max = {3.0, 6.0};
  s.cell_size = 0.1;
  s.noise_sigma = 0.0;
  s.frame_count = 1;
  synth::Agent pole;
  pole.radius = 0.1;
  pole.waypoints = {{0.4, 3.0, 0}};
  s.agents.push_back(pole);
  synth::CameraRig rig;
  rig.kind = ViewKind::depth;
  rig.width = 176;
  rig.height = 144;
  rig.camera = synth::look_at({0.0, 2.4, 0.0}, {0.0, 0.0, 3.5}, {0, 1, 0}, 220.0, 176, 144);
  s.cameras.push_back(rig);
  const auto d = std::get<DepthImage>(synth::render_frame(s, 0, 0));
  const auto bg = std::get<DepthImage>(synth::render_background(s, 0));
  BinaryMask fg(d.width(), d.height());
  for (std::size_t i = 0; i < fg.pixel_count(); ++i)
    fg[i] = d.range[i] > 0 && std::abs(d.range[i] - bg.range[i]) > 0.05f;
  const GridSpec spec = s.grid();
  const auto cells = depth_mask_to_grid(d, fg, rig.camera, spec);
  const Vec2 c = oracle::centroid(cells);
  const double ac = (0.4 - spec.origin_x) / spec.cell_size - 0.5;
  const double ar = (3.0 - spec.origin_y) / spec.cell_size - 0.5;
  CHECK(std::hypot(c.x - ac, c.y - ar) <= 1.5);
}

}  // TEST_SUITE
