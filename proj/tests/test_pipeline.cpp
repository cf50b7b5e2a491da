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

#include "doctest.h"
#include "oracles.hpp"
#include "topgrid/app.hpp"
#include "topgrid/pipeline.hpp"
#include "topgrid/synthgen.hpp"

using namespace topgrid;

namespace {

// The crossing scene reduced to its first agent and the given cameras.
synth::Scenario single_agent(std::vector<int> cams) {
  auto s = *synth::find_scenario("crossing");
  s.agents.resize(1);
  std::vector<synth::CameraRig> rigs;
  for (int c : cams) rigs.push_back(s.cameras[c]);
  s.cameras = rigs;
  return s;
}

ViewConfig rgb_view(const synth::Scenario& s, int cam) {
  ViewConfig v;
  v.view_id = cam;
  v.kind = ViewKind::rgb;
  v.calibration = s.cameras[cam].ground_homography();
  return v;
}

ColorImage rgb(const synth::Scenario& s, int cam, int t) {
  return std::get<ColorImage>(synth::render_frame(s, cam, t));
}

ColorBackground rgb_bg(const synth::Scenario& s, int cam) {
  return ColorBackground::user_frame(std::get<ColorImage>(synth::render_background(s, cam)));
}

Vec2 agent_cell(const synth::Scenario& s, int agent, int t) {
  const auto spec = s.grid();
  const Vec2 p = s.agents[agent].position(t);
  return {(p.x - spec.origin_x) / spec.cell_size - 0.5, (p.y - spec.origin_y) / spec.cell_size - 0.5};
}

int count(const BinaryMask& m) {
  return static_cast<int>(std::count(m.data().begin(), m.data().end(), 1));
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("running-mean background") {
  ColorImage a(6, 4, 0.3f);
  auto m = ColorBackground::running_mean(5);
  for (int i = 0; i < 10; ++i) m.update(a);
  CHECK(m.frame() == a);

  auto alt = ColorBackground::running_mean(4);
  for (int i = 0; i < 7; ++i) alt.update(ColorImage(6, 4, i % 2 ? 1.0f : 0.0f));
  for (float v : alt.frame().data()) CHECK(v == doctest::Approx(0.5));

  auto user = ColorBackground::user_frame(a);
  user.update(ColorImage(6, 4, 0.9f));
  CHECK(user.frame() == a);
  CHECK_THROWS(ColorBackground::running_mean(3).frame());
}

TEST_CASE("depth running mean skips invalid samples") {
  auto m = DepthBackground::running_mean(3);
  DepthImage a{Plane<float>(2, 1, 2.0f), 5.0f}, b{Plane<float>(2, 1, 0.0f), 5.0f};
  b.range.at(1, 0) = 4.0f;
  m.update(a);
  m.update(b);
  CHECK(m.frame().range.at(0, 0) == doctest::Approx(2.0));
  CHECK(m.frame().range.at(1, 0) == doctest::Approx(3.0));
}

TEST_CASE("process_view_rgb with no foreground yields an empty grid") {
  const auto s = single_agent({0});
  const auto bg = std::get<ColorImage>(synth::render_background(s, 0));
  const auto r = process_view_rgb(rgb_view(s, 0), bg, bg, ColorBackground::user_frame(bg), s.grid());
  CHECK(count(r.grid) == 0);
}

TEST_CASE("process_view_rgb localises a single agent") {
  const auto s = single_agent({0});
  const int t = 40;
  const auto r = process_view_rgb(rgb_view(s, 0), rgb(s, 0, t - 1), rgb(s, 0, t), rgb_bg(s, 0), s.grid());
  REQUIRE(count(r.grid) > 0);
  const Vec2 c = oracle::centroid(r.grid);
  const Vec2 want = agent_cell(s, 0, t);
  CHECK(std::hypot(c.x - want.x, c.y - want.y) * s.cell_size <= 1.0);
}

TEST_CASE("process_view_rgb separates two agents 5 m apart") {
  auto s = single_agent({0});
  synth::Agent a = s.agents[0], b = s.agents[0];
  a.waypoints = {{7.0, 5.0, 0}, {7.5, 5.2, 10}};
  b.waypoints = {{12.0, 5.0, 0}, {11.5, 4.8, 10}};
  s.agents = {a, b};
  const auto r = process_view_rgb(rgb_view(s, 0), rgb(s, 0, 4), rgb(s, 0, 5), rgb_bg(s, 0), s.grid());
  const auto lab = oracle::bfs_labels(r.grid);
  // every cluster sits near exactly one of the agents, and both are present
  bool near_a = false, near_b = false;
  for (const auto& c : oracle::cluster_centroids(r.grid)) {
    const Vec2 pa = agent_cell(s, 0, 5), pb = agent_cell(s, 1, 5);
    const double da = std::hypot(c.x - pa.x, c.y - pa.y), db = std::hypot(c.x - pb.x, c.y - pb.y);
    // one view smears a body d * h / (H - h) away from the camera, about
    // 1.6 m at this range
    CHECK(std::min(da, db) * s.cell_size < 2.0);
    near_a |= da < db;
    near_b |= db < da;
  }
  CHECK(near_a);
  CHECK(near_b);
  // no cluster touches both agents
  const auto spec = s.grid();
  const int mid = static_cast<int>((9.5 - spec.origin_x) / spec.cell_size);
  for (int r0 = 0; r0 < spec.rows; ++r0) CHECK(r.grid.at(mid, r0) == 0);
}

TEST_CASE("one view: fused occupancy equals the view's grid") {
  const auto s = single_agent({1});
  const auto res = process_rgb_frames({rgb_view(s, 0)}, {rgb(s, 0, 30)}, {rgb(s, 0, 29)},
                                      {rgb_bg(s, 0)}, s.grid(), 0);
  REQUIRE(res.views.size() == 1);
  CHECK(res.occupancy == res.views[0].grid);
}

TEST_CASE("two views: the agent survives, a one-view ghost does not") {
  const auto s = single_agent({0, 1});
  const int t = 30;
  auto f0 = rgb(s, 0, t), p0 = rgb(s, 0, t - 1);
  // a dark static patch painted into view 0 only, far from the agent
  for (int y = 300; y < 340; ++y)
    for (int x = 360; x < 400; ++x)
      for (int c = 0; c < 3; ++c) f0.at(x, y, c) = p0.at(x, y, c) = 0.1f;
  const auto res = process_rgb_frames({rgb_view(s, 0), rgb_view(s, 1)}, {f0, rgb(s, 1, t)},
                                      {p0, rgb(s, 1, t - 1)}, {rgb_bg(s, 0), rgb_bg(s, 1)},
                                      s.grid(), 0);
  CHECK(count(res.occupancy) > 0);
  BinaryMask ghost_only = res.views[0].grid;
  const auto ghost_cells = count(ghost_only);
  int ghost_in_fused = 0, ghost_cells_away = 0;
  const Vec2 a = agent_cell(s, 0, t);
  for (int r = 0; r < ghost_only.height(); ++r)
    for (int c = 0; c < ghost_only.width(); ++c) {
      if (!ghost_only.at(c, r) || std::hypot(c - a.x, r - a.y) < 40) continue;
      ++ghost_cells_away;
      ghost_in_fused += res.occupancy.at(c, r);
    }
  CHECK(ghost_cells > 0);
  CHECK(ghost_cells_away > 0);
  CHECK(ghost_in_fused == 0);
}

TEST_CASE("three views, one blacked out: the intersection is empty") {
  const auto s = *synth::find_scenario("crossing");
  std::vector<ViewConfig> views;
  std::vector<ColorImage> curr, prev;
  std::vector<ColorBackground> bgs;
  for (int c = 0; c < 3; ++c) {
    views.push_back(rgb_view(s, c));
    curr.push_back(rgb(s, c, 30));
    prev.push_back(rgb(s, c, 29));
    bgs.push_back(rgb_bg(s, c));
  }
  const auto full = process_rgb_frames(views, curr, prev, bgs, s.grid(), 3);
  CHECK(count(full.occupancy) > 0);
  curr[2] = prev[2] = ColorImage(curr[2].width(), curr[2].height(), 0.0f);
  const auto res = process_rgb_frames(views, curr, prev, bgs, s.grid(), 3);
  CHECK(count(res.occupancy) == 0);
}

TEST_CASE("fuse_views validates min_votes") {
  std::vector<ViewResult> v(2);
  GridSpec spec{0, 0, 1, 4, 4};
  v[0].grid = v[1].grid = spec.empty_mask();
  CHECK_THROWS(fuse_views(v, spec, 3));
  CHECK_THROWS(fuse_views(v, spec, -1));
  CHECK_NOTHROW(fuse_views(v, spec, 1));
}

TEST_CASE("view failures carry the stage and view") {
  const auto s = single_agent({0});
  auto view = rgb_view(s, 0);
  view.view_id = 7;
  try {
    process_view_rgb(view, ColorImage(8, 8), ColorImage(9, 8), rgb_bg(s, 0), s.grid());
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "foreground");
    CHECK(e.view_id() == 7);
  }
  view.calibration = PinholeCamera{};
  CHECK_THROWS(process_view_rgb(view, rgb(s, 0, 1), rgb(s, 0, 1), rgb_bg(s, 0), s.grid()));
}

TEST_CASE("depth frames") {
  const auto s = *synth::find_scenario("depth-walk");
  ViewConfig v;
  v.kind = ViewKind::depth;
  v.calibration = s.cameras[0].camera;
  v.params = DetectionParams::depth_defaults();
  const auto bg_img = std::get<DepthImage>(synth::render_background(s, 0));
  const auto bg = DepthBackground::user_frame(bg_img);
  const auto spec = s.grid();

  SUBCASE("no foreground") {
    const auto r = process_depth_frame(v, bg_img, bg_img, bg, spec);
    CHECK(count(r.occupancy) == 0);
  }
  SUBCASE("a walking cylinder is tracked") {
    for (int t = 1; t < 40; t += 3) {
      const auto prev = std::get<DepthImage>(synth::render_frame(s, 0, t - 1));
      const auto curr = std::get<DepthImage>(synth::render_frame(s, 0, t));
      const auto r = process_depth_frame(v, prev, curr, bg, spec);
      const Vec2 c = oracle::centroid(r.occupancy);
      const Vec2 want = agent_cell(s, 0, t);
      CHECK(std::hypot(c.x - want.x, c.y - want.y) <= 3.0);
    }
  }
  SUBCASE("a standing agent keeps all edges") {
    const auto curr = std::get<DepthImage>(synth::render_frame(s, 0, 60));
    const auto r = process_depth_frame(v, curr, curr, bg, spec);
    REQUIRE(count(r.occupancy) > 0);
    const Vec2 want = agent_cell(s, 0, 60);
    const auto cell = r.occupancy;
    bool hit = false;
    for (int dr = -3; dr <= 3; ++dr)
      for (int dc = -3; dc <= 3; ++dc)
        hit |= cell.at(static_cast<int>(std::lround(want.x)) + dc,
                       static_cast<int>(std::lround(want.y)) + dr) == 1;
    CHECK(hit);
  }
}

}  // TEST_SUITE
