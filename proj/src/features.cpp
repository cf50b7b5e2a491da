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

#include "topgrid/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "topgrid/imaging.hpp"
#include "topgrid/kernels.hpp"

namespace topgrid {

// ---------------------------------------------------------------------------
// Canny

EdgeMap canny_detect(const GrayImage& img, const CannyParams& params) {
  if (!(params.low > 0.0) || !(params.low < params.high))
    throw Error("canny: thresholds must satisfy 0 < low < high");
  const GrayImage smooth = gaussian_blur(img, params.sigma);
  auto [gx, gy] = sobel_gradients(smooth);

  const int w = img.width();
  const int h = img.height();
  Plane<float> mag(w, h);
  for (std::size_t i = 0; i < mag.pixel_count(); ++i)
    mag[i] = 0.25f * std::hypot(gx[i], gy[i]);

  auto m = [&](int x, int y) {
    return mag.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };

  // Non-maximum suppression along the quantised gradient direction.
  // 0 = suppressed, 1 = weak candidate, 2 = strong.
  Plane<std::uint8_t> state(w, h);
  const float low = static_cast<float>(params.low);
  const float high = static_cast<float>(params.high);
  constexpr double kTan22 = 0.41421356237309503;  // tan(22.5 deg)
  constexpr double kTan67 = 2.414213562373095;    // tan(67.5 deg)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float v = mag.at(x, y);
      if (v < low) continue;
      const double ax = std::abs(gx.at(x, y));
      const double ay = std::abs(gy.at(x, y));
      int dx, dy;
      if (ay <= kTan22 * ax) {
        dx = 1, dy = 0;
      } else if (ay >= kTan67 * ax) {
        dx = 0, dy = 1;
      } else {
        // same sign: gradient along the main diagonal (y grows downwards)
        dx = 1;
        dy = (gx.at(x, y) > 0) == (gy.at(x, y) > 0) ? 1 : -1;
      }
      if (v > m(x - dx, y - dy) && v >= m(x + dx, y + dy))
        state.at(x, y) = v >= high ? 2 : 1;
    }
  }

  // Hysteresis: grow strong pixels through 8-connected weak ones.
  BinaryMask edges(w, h);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (state.at(x, y) != 2 || edges.at(x, y)) continue;
      edges.at(x, y) = 1;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int ny = cy - 1; ny <= cy + 1; ++ny) {
          for (int nx = cx - 1; nx <= cx + 1; ++nx) {
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (state.at(nx, ny) == 0 || edges.at(nx, ny)) continue;
            edges.at(nx, ny) = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  return {std::move(edges), std::move(gx), std::move(gy)};
}

BinaryMask canny(const GrayImage& img, double low, double high, double sigma) {
  return canny_detect(img, CannyParams{low, high, sigma}).edges;
}

// ---------------------------------------------------------------------------
// Connected components

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void unite(std::vector<int>& parent, int a, int b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a == b) return;
  if (a < b) std::swap(a, b);
  parent[a] = b;
}

}  // namespace

LabelImage connected_components(const BinaryMask& mask, int min_area) {
  const int w = mask.width();
  const int h = mask.height();
  LabelImage out;
  out.labels = Plane<std::int32_t>(w, h);
  const std::size_t n = mask.pixel_count();
  if (n == 0) return out;

  // Provisional union-find over pixel indices; only foreground entries used.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const int i = y * w + x;
      if (x > 0 && mask.at(x - 1, y)) unite(parent, i, i - 1);
      if (y > 0) {
        const int up = i - w;
        if (mask.at(x, y - 1)) unite(parent, i, up);
        if (x > 0 && mask.at(x - 1, y - 1)) unite(parent, i, up - 1);
        if (x + 1 < w && mask.at(x + 1, y - 1)) unite(parent, i, up + 1);
      }
    }
  }

  std::vector<int> area(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (mask[i]) ++area[find_root(parent, static_cast<int>(i))];

  std::vector<int> label_of_root(n, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      const int r = find_root(parent, y * w + x);
      if (area[r] < min_area) continue;
      int& lab = label_of_root[r];
      if (lab == 0) {
        lab = out.count() + 1;
        out.components.push_back({lab, 0, {x, y, x, y}});
      }
      out.labels.at(x, y) = lab;
      Component& c = out.components[lab - 1];
      ++c.pixel_count;
      c.box.x0 = std::min(c.box.x0, x);
      c.box.x1 = std::max(c.box.x1, x);
      c.box.y1 = y;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pyramidal Horn-Schunck

namespace {

GrayImage downsample(const GrayImage& img) {
  const int w = (img.width() + 1) / 2;
  const int h = (img.height() + 1) / 2;
  GrayImage out(w, h);
  const int xmax = img.width() - 1;
  const int ymax = img.height() - 1;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int x0 = 2 * x, x1 = std::min(2 * x + 1, xmax);
      const int y0 = 2 * y, y1 = std::min(2 * y + 1, ymax);
      out.at(x, y) =
          0.25f * (img.at(x0, y0) + img.at(x1, y0) + img.at(x0, y1) + img.at(x1, y1));
    }
  }
  return out;
}

float bilinear(const Plane<float>& img, float fx, float fy) {
  const int w = img.width();
  const int h = img.height();
  fx = std::clamp(fx, 0.0f, static_cast<float>(w - 1));
  fy = std::clamp(fy, 0.0f, static_cast<float>(h - 1));
  const int x0 = std::min(static_cast<int>(fx), w - 1);
  const int y0 = std::min(static_cast<int>(fy), h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const float ax = fx - x0;
  const float ay = fy - y0;
  const float top = img.at(x0, y0) + ax * (img.at(x1, y0) - img.at(x0, y0));
  const float bot = img.at(x0, y1) + ax * (img.at(x1, y1) - img.at(x0, y1));
  return top + ay * (bot - top);
}

// Resamples a coarse flow to (w, h) and rescales it to the finer pixel units.
FlowField upsample_flow(const FlowField& coarse, int w, int h) {
  FlowField out(w, h);
  const float sx = static_cast<float>(coarse.width()) / w;
  const float sy = static_cast<float>(coarse.height()) / h;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float cx = (x + 0.5f) * sx - 0.5f;
      const float cy = (y + 0.5f) * sy - 0.5f;
      out.u.at(x, y) = bilinear(coarse.u, cx, cy) / sx;
      out.v.at(x, y) = bilinear(coarse.v, cx, cy) / sy;
    }
  }
  return out;
}

void refine_level(const GrayImage& i1, const GrayImage& i2, FlowField& flow,
                  const FlowParams& params) {
  const int w = i1.width();
  const int h = i1.height();
  const std::size_t n = i1.pixel_count();

  GrayImage warped(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      warped.at(x, y) = bilinear(i2, x + flow.u.at(x, y), y + flow.v.at(x, y));

  std::vector<float> ix(n), iy(n), it(n);
  auto cd = [&](const GrayImage& img, int x, int y, int dx, int dy) {
    const int xa = std::clamp(x - dx, 0, w - 1), xb = std::clamp(x + dx, 0, w - 1);
    const int ya = std::clamp(y - dy, 0, h - 1), yb = std::clamp(y + dy, 0, h - 1);
    return 0.5f * (img.at(xb, yb) - img.at(xa, ya));
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t o = static_cast<std::size_t>(y) * w + x;
      ix[o] = 0.5f * (cd(i1, x, y, 1, 0) + cd(warped, x, y, 1, 0));
      iy[o] = 0.5f * (cd(i1, x, y, 0, 1) + cd(warped, x, y, 0, 1));
      it[o] = warped[o] - i1[o] - ix[o] * flow.u[o] - iy[o] * flow.v[o];
    }
  }

  kernels::HsSystem sys{ix, iy, it, static_cast<float>(params.alpha * params.alpha), w, h};
  FlowField next(w, h);
  for (int k = 0; k < params.iterations; ++k) {
    kernels::omp::hs_sweep(sys, flow.u.data(), flow.v.data(), next.u.data(), next.v.data());
    std::swap(flow, next);
  }
}

}  // namespace

FlowField dense_flow(const GrayImage& prev, const GrayImage& curr, const FlowParams& params) {
  require_same_shape(prev, curr, "dense_flow");
  if (!(params.alpha > 0.0) || params.iterations < 1 || params.pyramid_levels < 1)
    throw Error("dense_flow: invalid flow parameters");
  if (prev.empty()) return FlowField(prev.width(), prev.height());

  auto prepare = [&](const GrayImage& img) {
    GrayImage out = params.presmooth_sigma > 0.0 ? gaussian_blur(img, params.presmooth_sigma) : img;
    for (float& v : out.data()) v *= 255.0f;
    return out;
  };
  std::vector<GrayImage> p1{prepare(prev)};
  std::vector<GrayImage> p2{prepare(curr)};
  while (static_cast<int>(p1.size()) < params.pyramid_levels && p1.back().width() >= 8 &&
         p1.back().height() >= 8) {
    p1.push_back(downsample(p1.back()));
    p2.push_back(downsample(p2.back()));
  }

  FlowField flow(p1.back().width(), p1.back().height());
  for (int level = static_cast<int>(p1.size()) - 1; level >= 0; --level) {
    const GrayImage& i1 = p1[level];
    if (flow.width() != i1.width() || flow.height() != i1.height())
      flow = upsample_flow(flow, i1.width(), i1.height());
    refine_level(i1, p2[level], flow, params);
  }
  return flow;
}

// ---------------------------------------------------------------------------
// Mean flow, angular threshold, scanline fill

std::vector<ComponentFlow> mean_flow_per_component(const LabelImage& labels,
                                                   const FlowField& flow) {
  require_same_shape(labels, flow, "mean_flow_per_component");
  const int k = labels.count();
  std::vector<double> su(k + 1, 0.0), sv(k + 1, 0.0);
  std::vector<int> count(k + 1, 0);
  const auto lab = labels.labels.data();
  for (std::size_t i = 0; i < lab.size(); ++i) {
    const int l = lab[i];
    if (l <= 0) continue;
    su[l] += flow.u[i];
    sv[l] += flow.v[i];
    ++count[l];
  }
  std::vector<ComponentFlow> out;
  out.reserve(k);
  for (int l = 1; l <= k; ++l) {
    if (count[l] == 0) continue;
    out.push_back({l, su[l] / count[l], sv[l] / count[l], count[l]});
  }
  return out;
}

BinaryMask angular_threshold(const BinaryMask& edges, const LabelImage& labels,
                             const std::vector<ComponentFlow>& flows, const GradientImage& gx,
                             const GradientImage& gy, double theta_max) {
  require_same_shape(edges, labels, "angular_threshold");
  require_same_shape(edges, gx, "angular_threshold");
  require_same_shape(edges, gy, "angular_threshold");
  if (!(theta_max > 0.0) || !(theta_max < std::numbers::pi / 2))
    throw Error("angular_threshold: theta_max must lie in (0, pi/2)");

  std::vector<const ComponentFlow*> by_label(labels.count() + 1, nullptr);
  for (const auto& f : flows) {
    if (f.label >= 1 && f.label <= labels.count()) by_label[f.label] = &f;
  }
  for (int l = 1; l <= labels.count(); ++l) {
    if (!by_label[l])
      throw Error("angular_threshold: no mean flow for label " + std::to_string(l));
  }

  BinaryMask out(edges.width(), edges.height());
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    const int l = labels.labels[i];
    if (!edges[i] || l <= 0) continue;
    const ComponentFlow& f = *by_label[l];
    if (std::hypot(f.mean_u, f.mean_v) < kStationaryFlow) {
      out[i] = 1;
      continue;
    }
    // edge tangent is the gradient rotated by 90 degrees
    const double tx = -gy[i];
    const double ty = gx[i];
    if (tx == 0.0 && ty == 0.0) continue;
    const double cross = tx * f.mean_v - ty * f.mean_u;
    const double dot = tx * f.mean_u + ty * f.mean_v;
    double angle = std::abs(std::atan2(cross, dot));  // [0, pi]
    angle = std::min(angle, std::numbers::pi - angle);
    if (angle < theta_max) out[i] = 1;
  }
  return out;
}

BinaryMask scanline_fill(const BinaryMask& retained, const LabelImage& labels) {
  require_same_shape(retained, labels, "scanline_fill");
  const int w = retained.width();
  const int k = labels.count();
  BinaryMask out = retained;

  std::vector<int> left(k + 1), right(k + 1), hits(k + 1, 0);
  std::vector<int> touched;
  for (int y = 0; y < retained.height(); ++y) {
    touched.clear();
    for (int x = 0; x < w; ++x) {
      const int l = labels.labels.at(x, y);
      if (l <= 0 || l > k || !retained.at(x, y)) continue;
      if (hits[l]++ == 0) {
        left[l] = x;
        touched.push_back(l);
      }
      right[l] = x;
    }
    for (int l : touched) {
      if (hits[l] >= 2) {
        for (int x = left[l]; x <= right[l]; ++x)
          if (labels.labels.at(x, y) == l) out.at(x, y) = 1;
      }
      hits[l] = 0;
    }
  }
  return out;
}

}  // namespace topgrid
