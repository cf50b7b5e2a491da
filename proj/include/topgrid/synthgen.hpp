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

// Synthetic multi-camera scenes: pedestrians are textured upright cylinders
// walking piecewise-linear paths over a noise-textured floor. The generator
// knows the exact footprints, which makes it the oracle for end-to-end tests.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "topgrid/geometry.hpp"
#include "topgrid/image.hpp"
#include "topgrid/pipeline.hpp"

namespace topgrid::synth {

/// Which world axis points up. Ground coordinates (a, b) embed as (a, b, h)
/// for z_up and as (a, h, b) for y_up, the convention of the depth sensors.
enum class UpAxis { z_up, y_up };

struct Waypoint {
  double a = 0.0;  // ground coordinates, meters
  double b = 0.0;
  int frame = 0;
};

/// An agent exists from its first to its last waypoint frame.
struct Agent {
  double radius = 0.25;
  double height = 1.75;
  std::array<double, 3> albedo{0.8, 0.2, 0.2};
  std::vector<Waypoint> waypoints;

  bool present(int t) const;
  Vec2 position(int t) const;  // ground coordinates; clamps outside the lifetime
  void validate() const;
};

struct CameraRig {
  ViewKind kind = ViewKind::rgb;
  PinholeCamera camera;
  int width = 320;
  int height = 240;
  double max_range = 5.0;  // depth sensors only

  /// Image -> ground homography of an rgb rig (world plane z = 0).
  Homography ground_homography() const { return camera.ground_homography(); }
};

struct Scenario {
  std::string name;
  UpAxis up = UpAxis::z_up;
  Vec2 ground_min{0.0, 0.0};  // world extent on the ground
  Vec2 ground_max{20.0, 10.0};
  double cell_size = 0.05;
  std::vector<Agent> agents;
  std::vector<CameraRig> cameras;
  int frame_count = 2;
  std::uint64_t seed = 1;
  double noise_sigma = 0.01;  // intensity units for rgb, meters for depth
  int t_span = 100;           // recommended sliding window for analytics

  GridSpec grid() const;
  Vec3 to_world(double a, double b, double h) const;
  void validate() const;
};

/// Camera at `eye` looking at `target`; x right, y down in the image.
PinholeCamera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal,
                      int width, int height);

using Frame = std::variant<ColorImage, DepthImage>;

/// Deterministic render of camera `cam` at frame t, with seeded sensor noise.
/// RGB output is quantised to 8 bits and depth to millimetres, so the frames
/// survive a round-trip through the netpbm codecs unchanged.
Frame render_frame(const Scenario& s, int cam, int t);
/// The same camera with no agents and no noise.
Frame render_background(const Scenario& s, int cam);

BinaryMask ground_truth_footprint(const Scenario& s, const GridSpec& spec, int t);

/// crossing, loiter, crowd, depth-walk, dropbag.
std::vector<Scenario> standard_scenarios();
std::optional<Scenario> find_scenario(const std::string& name);
std::vector<std::string> scenario_names();

std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

}  // namespace topgrid::synth
