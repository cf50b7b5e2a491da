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

// Independent reference computations shared by the unit and acceptance
// tests. Everything here is written from first principles and deliberately
// avoids the library code it checks.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <utility>
#include <vector>

#include "topgrid/geometry.hpp"
#include "topgrid/image.hpp"

namespace oracle {

inline topgrid::BinaryMask random_mask(int w, int h, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution bit(p);
  topgrid::BinaryMask m(w, h);
  for (std::size_t i = 0; i < m.pixel_count(); ++i) m[i] = bit(rng) ? 1 : 0;
  return m;
}

/// Mean of the last `span` frames (all frames while fewer exist).
inline double window_mean(const std::deque<topgrid::BinaryMask>& history, std::size_t i,
                          int span) {
  const int n = static_cast<int>(history.size());
  const int first = std::max(0, n - span);
  int count = 0;
  for (int k = first; k < n; ++k) count += history[k][i] ? 1 : 0;
  return static_cast<double>(count) / (n - first);
}

/// Breadth-first 8-connected labeling; labels in raster order of first pixel.
inline std::vector<int> bfs_labels(const topgrid::BinaryMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<int> lab(m.pixel_count(), 0);
  int next = 0;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      if (!m.at(x0, y0) || lab[y0 * w + x0]) continue;
      ++next;
      std::deque<std::pair<int, int>> q{{x0, y0}};
      lab[y0 * w + x0] = next;
      while (!q.empty()) {
        auto [x, y] = q.front();
        q.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (!m.at(nx, ny) || lab[ny * w + nx]) continue;
            lab[ny * w + nx] = next;
            q.push_back({nx, ny});
          }
        }
      }
    }
  }
  return lab;
}

/// Projective map written out by hand: (x, y) -> (H [x y 1]^T) dehomogenised.
inline topgrid::Vec2 map_point(const topgrid::Mat3& h, topgrid::Vec2 p) {
  const double X = h[0] * p.x + h[1] * p.y + h[2];
  const double Y = h[3] * p.x + h[4] * p.y + h[5];
  const double W = h[6] * p.x + h[7] * p.y + h[8];
  return {X / W, Y / W};
}

/// A homography close to a similarity with a mild perspective term, so the
/// unit square region [0, 640] x [0, 480] stays far from the horizon.
inline topgrid::Mat3 random_homography(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-3.14159, 3.14159), sc(0.01, 0.05),
      tr(-10.0, 10.0), persp(-2e-4, 2e-4), shear(-0.2, 0.2);
  const double a = ang(rng), s = sc(rng), k = shear(rng);
  const double c = std::cos(a), n = std::sin(a);
  return {s * c, s * (-n + k), tr(rng), s * n, s * (c + k), tr(rng), persp(rng), persp(rng), 1.0};
}

/// Max element difference after scaling both matrices to h[8] = 1.
inline double max_normalised_diff(const topgrid::Mat3& a, const topgrid::Mat3& b) {
  double d = 0.0;
  for (int i = 0; i < 9; ++i) d = std::max(d, std::abs(a[i] / a[8] - b[i] / b[8]));
  return d;
}

/// Rotation from Z-Y-X Euler angles.
inline topgrid::Mat3 rotation(double yaw, double pitch, double roll) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  return {cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
          sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
          -sp,     cp * sr,                cp * cr};
}

struct Projection {
  topgrid::Vec2 pixel;
  double depth;
};

/// Pinhole projection from the raw parameters.
inline Projection project(double fx, double fy, double cx, double cy, const topgrid::Mat3& r,
                          const topgrid::Vec3& t, const topgrid::Vec3& p) {
  const double xc = r[0] * p.x + r[1] * p.y + r[2] * p.z + t.x;
  const double yc = r[3] * p.x + r[4] * p.y + r[5] * p.z + t.y;
  const double zc = r[6] * p.x + r[7] * p.y + r[8] * p.z + t.z;
  return {{fx * xc / zc + cx, fy * yc / zc + cy}, zc};
}

inline double iou(const topgrid::BinaryMask& a, const topgrid::BinaryMask& b) {
  int inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i) {
    inter += (a[i] && b[i]) ? 1 : 0;
    uni += (a[i] || b[i]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
}

inline topgrid::BinaryMask dilate(const topgrid::BinaryMask& m, int r) {
  topgrid::BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx >= 0 && ny >= 0 && nx < m.width() && ny < m.height()) out.at(nx, ny) = 1;
        }
    }
  return out;
}

/// Centroids (col, row) of the 8-connected clusters of a mask.
inline std::vector<topgrid::Vec2> cluster_centroids(const topgrid::BinaryMask& m) {
  const auto lab = bfs_labels(m);
  std::vector<std::array<double, 3>> acc;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      const int l = lab[static_cast<std::size_t>(y) * m.width() + x];
      if (l == 0) continue;
      if (static_cast<int>(acc.size()) < l) acc.resize(l, {0.0, 0.0, 0.0});
      acc[l - 1][0] += x;
      acc[l - 1][1] += y;
      acc[l - 1][2] += 1.0;
    }
  std::vector<topgrid::Vec2> out;
  for (const auto& a : acc) out.push_back({a[0] / a[2], a[1] / a[2]});
  return out;
}

/// Centroid of all set cells, or nullopt-like (-1e9) when empty.
inline topgrid::Vec2 centroid(const topgrid::BinaryMask& m) {
  double sx = 0, sy = 0, n = 0;
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m.at(x, y)) {
        sx += x;
        sy += y;
        n += 1;
      }
  if (n == 0) return {-1e9, -1e9};
  return {sx / n, sy / n};
}

}  // namespace oracle
