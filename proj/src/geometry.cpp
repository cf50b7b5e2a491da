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

#include "topgrid/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace topgrid {

// ---------------------------------------------------------------------------
// 3x3 helpers

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
  return c;
}

Mat3 transpose(const Mat3& m) {
  return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
}

double determinant(const Mat3& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 inverse(const Mat3& m) {
  const double det = determinant(m);
  if (!(std::abs(det) > 1e-300)) throw Error("inverse of a singular 3x3 matrix");
  const double s = 1.0 / det;
  return {(m[4] * m[8] - m[5] * m[7]) * s, (m[2] * m[7] - m[1] * m[8]) * s,
          (m[1] * m[5] - m[2] * m[4]) * s, (m[5] * m[6] - m[3] * m[8]) * s,
          (m[0] * m[8] - m[2] * m[6]) * s, (m[2] * m[3] - m[0] * m[5]) * s,
          (m[3] * m[7] - m[4] * m[6]) * s, (m[1] * m[6] - m[0] * m[7]) * s,
          (m[0] * m[4] - m[1] * m[3]) * s};
}

Vec3 multiply(const Mat3& m, const Vec3& v) {
  return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
          m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

// ---------------------------------------------------------------------------
// Homography

Homography::Homography(const Mat3& m) : m_(m) {
  if (m_[8] != 0.0) {
    const double s = 1.0 / m_[8];
    for (double& e : m_) e *= s;
  }
  if (!(std::abs(determinant(m_)) > 1e-12))
    throw CalibrationError(CalibrationError::Kind::singular, "homography is singular");
}

Homography Homography::inverse() const { return Homography(topgrid::inverse(m_)); }

double Homography::denominator(Vec2 p) const { return m_[6] * p.x + m_[7] * p.y + m_[8]; }

std::optional<Vec2> Homography::try_apply(Vec2 p) const {
  const double w = denominator(p);
  if (!(std::abs(w) > 1e-12)) return std::nullopt;
  return Vec2{(m_[0] * p.x + m_[1] * p.y + m_[2]) / w, (m_[3] * p.x + m_[4] * p.y + m_[5]) / w};
}

Vec2 Homography::apply(Vec2 p) const {
  auto r = try_apply(p);
  if (!r) throw UnmappableError("point lies on the homography's horizon line");
  return *r;
}

namespace {

// Similarity taking the points to centroid 0 and RMS distance sqrt(2).
Mat3 conditioning(const std::vector<Vec2>& pts) {
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) mx += p.x, my += p.y;
  mx /= pts.size();
  my /= pts.size();
  double ms = 0.0;
  for (const auto& p : pts) ms += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
  const double rms = std::sqrt(ms / pts.size());
  if (!(rms > 0.0))
    throw CalibrationError(CalibrationError::Kind::degenerate, "all points coincide");
  const double s = std::sqrt(2.0) / rms;
  return {s, 0, -s * mx, 0, s, -s * my, 0, 0, 1};
}

Vec2 transform(const Mat3& m, Vec2 p) {
  const Vec3 q = multiply(m, Vec3{p.x, p.y, 1.0});
  return {q.x / q.z, q.y / q.z};
}

}  // namespace

HomographyFit homography_from_points(const std::vector<PointPair>& pairs) {
  if (pairs.size() < 4)
    throw CalibrationError(CalibrationError::Kind::token_count,
                           "homography fit needs at least 4 point pairs");
  std::vector<Vec2> img, wld;
  for (const auto& p : pairs) {
    img.push_back(p.image);
    wld.push_back(p.world);
  }
  const Mat3 ti = conditioning(img);
  const Mat3 tw = conditioning(wld);

  const int rows = std::max<int>(9, 2 * static_cast<int>(pairs.size()));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, 9);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Vec2 p = transform(ti, img[k]);
    const Vec2 q = transform(tw, wld[k]);
    a.row(2 * k) << p.x, p.y, 1, 0, 0, 0, -q.x * p.x, -q.x * p.y, -q.x;
    a.row(2 * k + 1) << 0, 0, 0, p.x, p.y, 1, -q.y * p.x, -q.y * p.y, -q.y;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(7) - s(8) <= 1e-12 * std::max(1.0, s(0)))
    throw CalibrationError(CalibrationError::Kind::degenerate,
                           "point configuration does not determine a homography");
  const Eigen::VectorXd x = svd.matrixV().col(8);
  const Mat3 hn{x(0), x(1), x(2), x(3), x(4), x(5), x(6), x(7), x(8)};

  HomographyFit fit;
  try {
    fit.h = Homography(multiply(topgrid::inverse(tw), multiply(hn, ti)));
  } catch (const CalibrationError&) {
    throw CalibrationError(CalibrationError::Kind::degenerate,
                           "fitted homography is singular (collinear points?)");
  }
  const Homography back = fit.h.inverse();
  double se = 0.0;
  for (const auto& p : pairs) {
    const auto q = back.try_apply(p.world);
    if (!q) {
      se = INFINITY;
      break;
    }
    se += (q->x - p.image.x) * (q->x - p.image.x) + (q->y - p.image.y) * (q->y - p.image.y);
  }
  fit.rms_px = std::sqrt(se / pairs.size());
  return fit;
}

// ---------------------------------------------------------------------------
// Pinhole camera

PinholeCamera::PinholeCamera(double fx, double fy, double cx, double cy, const Mat3& rotation,
                             const Vec3& translation, double tol)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy), r_(rotation), t_(translation) {
  if (!(fx > 0.0) || !(fy > 0.0))
    throw CalibrationError(CalibrationError::Kind::bad_number, "focal lengths must be positive");
  const Mat3 rtr = multiply(transpose(r_), r_);
  for (int i = 0; i < 9; ++i) {
    if (std::abs(rtr[i] - kIdentity3[i]) > tol)
      throw CalibrationError(CalibrationError::Kind::non_orthonormal,
                             "rotation matrix is not orthonormal");
  }
  if (std::abs(determinant(r_) - 1.0) > tol)
    throw CalibrationError(CalibrationError::Kind::non_orthonormal,
                           "rotation matrix has determinant != +1");
}

Vec3 PinholeCamera::center() const {
  const Vec3 c = multiply(transpose(r_), t_);
  return {-c.x, -c.y, -c.z};
}

Vec3 PinholeCamera::to_camera(const Vec3& world) const {
  const Vec3 p = multiply(r_, world);
  return {p.x + t_.x, p.y + t_.y, p.z + t_.z};
}

std::optional<std::pair<Vec2, double>> PinholeCamera::project(const Vec3& world) const {
  const Vec3 p = to_camera(world);
  if (!(p.z > 0.0)) return std::nullopt;
  return std::pair{Vec2{fx_ * p.x / p.z + cx_, fy_ * p.y / p.z + cy_}, p.z};
}

Vec3 PinholeCamera::backproject(Vec2 pixel, double depth) const {
  const Vec3 p{(pixel.x - cx_) / fx_ * depth - t_.x, (pixel.y - cy_) / fy_ * depth - t_.y,
               depth - t_.z};
  return multiply(transpose(r_), p);
}

Homography PinholeCamera::ground_homography() const {
  // world (X, Y, 0, 1) -> image: K [r1 r2 t]
  const Mat3 k{fx_, 0, cx_, 0, fy_, cy_, 0, 0, 1};
  const Mat3 rt{r_[0], r_[1], t_.x, r_[3], r_[4], t_.y, r_[6], r_[7], t_.z};
  return Homography(topgrid::inverse(multiply(k, rt)));
}

Vec3 backproject_depth(const PinholeCamera& cam, Vec2 pixel, double depth) {
  if (!(depth > 0.0)) throw UnmappableError("invalid depth sample");
  return cam.backproject(pixel, depth);
}

// ---------------------------------------------------------------------------
// Grid mapping

void GridSpec::validate() const {
  if (!(cell_size > 0.0) || cols < 1 || rows < 1)
    throw Error("grid spec needs cell_size > 0 and at least one row and column");
}

std::optional<std::pair<int, int>> GridSpec::cell_of(double gx, double gy) const {
  const double c = std::floor((gx - origin_x) / cell_size);
  const double r = std::floor((gy - origin_y) / cell_size);
  if (!(c >= 0.0 && c < cols && r >= 0.0 && r < rows)) return std::nullopt;
  return std::pair{static_cast<int>(c), static_cast<int>(r)};
}

Vec2 GridSpec::cell_center(int col, int row) const {
  return {origin_x + (col + 0.5) * cell_size, origin_y + (row + 0.5) * cell_size};
}

BinaryMask warp_mask_to_grid(const BinaryMask& mask, const Homography& h, const GridSpec& spec) {
  spec.validate();
  BinaryMask out = spec.empty_mask();
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const Vec2 centre{static_cast<double>(x), static_cast<double>(y)};
      if (auto p = h.try_apply(centre)) {
        if (auto cell = spec.cell_of(p->x, p->y)) out.at(cell->first, cell->second) = 1;
      }

      // Corner rectangle; skipped when the pixel straddles the horizon.
      const double w0 = h.denominator(centre);
      double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
      bool ok = true;
      for (int k = 0; k < 4 && ok; ++k) {
        const Vec2 corner{x + ((k & 1) ? 0.5 : -0.5), y + ((k & 2) ? 0.5 : -0.5)};
        const double w = h.denominator(corner);
        auto q = h.try_apply(corner);
        if (!q || (w > 0) != (w0 > 0)) {
          ok = false;
          break;
        }
        x0 = std::min(x0, q->x), x1 = std::max(x1, q->x);
        y0 = std::min(y0, q->y), y1 = std::max(y1, q->y);
      }
      if (!ok) continue;
      const double c0 = std::max(0.0, std::floor((x0 - spec.origin_x) / spec.cell_size));
      const double c1 = std::min<double>(spec.cols - 1,
                                         std::ceil((x1 - spec.origin_x) / spec.cell_size) - 1);
      const double r0 = std::max(0.0, std::floor((y0 - spec.origin_y) / spec.cell_size));
      const double r1 = std::min<double>(spec.rows - 1,
                                         std::ceil((y1 - spec.origin_y) / spec.cell_size) - 1);
      for (int r = static_cast<int>(r0); r <= static_cast<int>(r1); ++r)
        for (int c = static_cast<int>(c0); c <= static_cast<int>(c1); ++c) out.at(c, r) = 1;
    }
  }
  return out;
}

BinaryMask depth_mask_to_grid(const DepthImage& depth, const BinaryMask& mask,
                              const PinholeCamera& cam, const GridSpec& spec, GroundAxes axes) {
  require_same_shape(depth, mask, "depth_mask_to_grid");
  spec.validate();
  BinaryMask out = spec.empty_mask();
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y) || !depth.valid(x, y)) continue;
      const Vec3 p = cam.backproject({static_cast<double>(x), static_cast<double>(y)},
                                     depth.range.at(x, y));
      // keep the two ground coordinates, discard height
      const auto cell = axes == GroundAxes::xz ? spec.cell_of(p.x, p.z) : spec.cell_of(p.x, p.y);
      if (cell) out.at(cell->first, cell->second) = 1;
    }
  }
  return out;
}

}  // namespace topgrid
