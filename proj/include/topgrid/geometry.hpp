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

#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "topgrid/image.hpp"

namespace topgrid {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Row-major 3x3.
using Mat3 = std::array<double, 9>;

inline constexpr Mat3 kIdentity3{1, 0, 0, 0, 1, 0, 0, 0, 1};

Mat3 multiply(const Mat3& a, const Mat3& b);
Mat3 transpose(const Mat3& m);
double determinant(const Mat3& m);
Mat3 inverse(const Mat3& m);  // throws on |det| <= 1e-300
Vec3 multiply(const Mat3& m, const Vec3& v);

/// Image pixel -> ground plane (meters). Stored normalised with h[8] = 1
/// whenever h[8] != 0.
class Homography {
 public:
  Homography() = default;
  /// Throws CalibrationError(singular) when |det| <= 1e-12.
  explicit Homography(const Mat3& m);

  const Mat3& matrix() const { return m_; }
  Homography inverse() const;

  /// Throws UnmappableError when |w| <= 1e-12 (pixel on the horizon line).
  Vec2 apply(Vec2 p) const;
  /// Non-throwing form for hot loops.
  std::optional<Vec2> try_apply(Vec2 p) const;
  /// Homogeneous denominator for p.
  double denominator(Vec2 p) const;

  friend bool operator==(const Homography&, const Homography&) = default;

 private:
  Mat3 m_ = kIdentity3;
};

inline Vec2 apply_homography(const Homography& h, Vec2 p) { return h.apply(p); }

struct PointPair {
  Vec2 image;
  Vec2 world;
};

struct HomographyFit {
  Homography h;
  double rms_px = 0.0;  // reprojection RMS in image pixels over the inputs
};

/// Normalised DLT (Hartley conditioning) least-squares fit.
HomographyFit homography_from_points(const std::vector<PointPair>& pairs);

/// Pinhole camera; camera coordinates are rotation * world + translation,
/// x right, y down, z along the optical axis.
class PinholeCamera {
 public:
  PinholeCamera() = default;
  /// Validates fx, fy > 0 and that rotation is orthonormal with det +1 to `tol`.
  PinholeCamera(double fx, double fy, double cx, double cy, const Mat3& rotation,
                const Vec3& translation, double tol = 1e-9);

  double fx() const { return fx_; }
  double fy() const { return fy_; }
  double cx() const { return cx_; }
  double cy() const { return cy_; }
  const Mat3& rotation() const { return r_; }
  const Vec3& translation() const { return t_; }
  Vec3 center() const;  // camera position in world coordinates

  Vec3 to_camera(const Vec3& world) const;
  /// Pixel coordinates and camera-frame depth; nullopt behind the camera.
  std::optional<std::pair<Vec2, double>> project(const Vec3& world) const;
  Vec3 backproject(Vec2 pixel, double depth) const;

  /// Image -> world homography for the world plane z = 0.
  Homography ground_homography() const;

  friend bool operator==(const PinholeCamera&, const PinholeCamera&) = default;

 private:
  double fx_ = 1.0, fy_ = 1.0, cx_ = 0.0, cy_ = 0.0;
  Mat3 r_ = kIdentity3;
  Vec3 t_{};
};

/// Throws UnmappableError for depth <= 0.
Vec3 backproject_depth(const PinholeCamera& cam, Vec2 pixel, double depth);

/// Which world coordinates index the top-view grid.
enum class GroundAxes {
  xy,  // RGB homographies: ground plane z = 0
  xz,  // depth cameras: height is the y axis and gets dropped
};

struct GridSpec {
  double origin_x = 0.0;  // world coordinates of the (0,0) cell corner
  double origin_y = 0.0;
  double cell_size = 0.05;
  int cols = 400;
  int rows = 200;

  void validate() const;
  /// Cell containing a ground point, or nullopt outside the grid.
  std::optional<std::pair<int, int>> cell_of(double gx, double gy) const;
  Vec2 cell_center(int col, int row) const;
  BinaryMask empty_mask() const { return BinaryMask(cols, rows); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Forward-warps every set pixel (its centre and its four corners) through h
/// and marks the covered cells.
BinaryMask warp_mask_to_grid(const BinaryMask& mask, const Homography& h, const GridSpec& spec);

/// Backprojects masked pixels with valid depth and marks their ground cells.
BinaryMask depth_mask_to_grid(const DepthImage& depth, const BinaryMask& mask,
                              const PinholeCamera& cam, const GridSpec& spec,
                              GroundAxes axes = GroundAxes::xz);

}  // namespace topgrid
