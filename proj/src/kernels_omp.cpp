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

// Row-parallel kernels. Each output element is computed by exactly the same
// expression, in the same association order, as kernels_ref.cpp; only the
// border handling is split off the interior fast path.

#include <algorithm>
#include <cstddef>

#include <omp.h>

#include "topgrid/kernels.hpp"

namespace topgrid::kernels {

namespace {
int g_threads = 0;
}

void set_thread_count(int threads) {
  g_threads = threads;
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

namespace omp {
namespace {

inline float px(const float* img, int width, int height, int x, int y) {
  x = std::clamp(x, 0, width - 1);
  y = std::clamp(y, 0, height - 1);
  return img[static_cast<std::size_t>(y) * width + x];
}

inline std::ptrdiff_t ssize(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

void to_gray(std::span<const float> rgb, std::span<float> gray) {
  const float* in = rgb.data();
  float* out = gray.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(gray.size()); ++i) {
    const float g = 0.299f * in[3 * i] + 0.587f * in[3 * i + 1] + 0.114f * in[3 * i + 2];
    out[i] = std::clamp(g, 0.0f, 1.0f);
  }
}

void rgb_distance_mask(std::span<const float> img, std::span<const float> bg, float tau,
                       std::span<std::uint8_t> out) {
  const float tau2 = tau * tau;
  const float* a = img.data();
  const float* b = bg.data();
  std::uint8_t* o = out.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(out.size()); ++i) {
    const float dr = a[3 * i] - b[3 * i];
    const float dg = a[3 * i + 1] - b[3 * i + 1];
    const float db = a[3 * i + 2] - b[3 * i + 2];
    o[i] = (dr * dr + dg * dg + db * db) > tau2 ? 1 : 0;
  }
}

void convolve_rows(std::span<const float> src, std::span<float> dst, int width, int height,
                   std::span<const float> taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  const float* s = src.data();
  const float* k = taps.data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const float* row = s + static_cast<std::size_t>(y) * width;
    float* out = dst.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      float acc = 0.0f;
      if (x >= r && x + r < width) {
        const float* p = row + x - r;
        for (int j = 0; j <= 2 * r; ++j) acc += k[j] * p[j];
      } else {
        for (int j = -r; j <= r; ++j) acc += k[j + r] * row[std::clamp(x + j, 0, width - 1)];
      }
      out[x] = acc;
    }
  }
}

void convolve_cols(std::span<const float> src, std::span<float> dst, int width, int height,
                   std::span<const float> taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  const float* s = src.data();
  const float* k = taps.data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    float* out = dst.data() + static_cast<std::size_t>(y) * width;
    std::fill(out, out + width, 0.0f);
    // Accumulate tap by tap over whole rows: same per-element order as ref.
    for (int j = -r; j <= r; ++j) {
      const int yy = std::clamp(y + j, 0, height - 1);
      const float* row = s + static_cast<std::size_t>(yy) * width;
      const float kw = k[j + r];
      for (int x = 0; x < width; ++x) out[x] += kw * row[x];
    }
  }
}

void sobel(std::span<const float> src, std::span<float> gx, std::span<float> gy, int width,
           int height) {
  const float* s = src.data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const bool inner_row = y > 0 && y + 1 < height;
    for (int x = 0; x < width; ++x) {
      float a, b, c, d, f, g, h, i;
      if (inner_row && x > 0 && x + 1 < width) {
        const float* up = s + static_cast<std::size_t>(y - 1) * width + x;
        const float* mid = up + width;
        const float* dn = mid + width;
        a = up[-1], b = up[0], c = up[1];
        d = mid[-1], f = mid[1];
        g = dn[-1], h = dn[0], i = dn[1];
      } else {
        a = px(s, width, height, x - 1, y - 1);
        b = px(s, width, height, x, y - 1);
        c = px(s, width, height, x + 1, y - 1);
        d = px(s, width, height, x - 1, y);
        f = px(s, width, height, x + 1, y);
        g = px(s, width, height, x - 1, y + 1);
        h = px(s, width, height, x, y + 1);
        i = px(s, width, height, x + 1, y + 1);
      }
      const std::size_t o = static_cast<std::size_t>(y) * width + x;
      gx[o] = (c + 2.0f * f + i) - (a + 2.0f * d + g);
      gy[o] = (g + 2.0f * h + i) - (a + 2.0f * b + c);
    }
  }
}

void hs_sweep(const HsSystem& sys, std::span<const float> u, std::span<const float> v,
              std::span<float> u_out, std::span<float> v_out) {
  const int w = sys.width;
  const int h = sys.height;
  const float* U = u.data();
  const float* V = v.data();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const bool inner_row = y > 0 && y + 1 < h;
    for (int x = 0; x < w; ++x) {
      float ubar, vbar;
      if (inner_row && x > 0 && x + 1 < w) {
        const std::size_t c = static_cast<std::size_t>(y) * w + x;
        const std::size_t n = c - w;
        const std::size_t s = c + w;
        ubar = (1.0f / 6.0f) * (U[c - 1] + U[c + 1] + U[n] + U[s]) +
               (1.0f / 12.0f) * (U[n - 1] + U[n + 1] + U[s - 1] + U[s + 1]);
        vbar = (1.0f / 6.0f) * (V[c - 1] + V[c + 1] + V[n] + V[s]) +
               (1.0f / 12.0f) * (V[n - 1] + V[n + 1] + V[s - 1] + V[s + 1]);
      } else {
        ubar = (1.0f / 6.0f) * (px(U, w, h, x - 1, y) + px(U, w, h, x + 1, y) +
                                px(U, w, h, x, y - 1) + px(U, w, h, x, y + 1)) +
               (1.0f / 12.0f) * (px(U, w, h, x - 1, y - 1) + px(U, w, h, x + 1, y - 1) +
                                 px(U, w, h, x - 1, y + 1) + px(U, w, h, x + 1, y + 1));
        vbar = (1.0f / 6.0f) * (px(V, w, h, x - 1, y) + px(V, w, h, x + 1, y) +
                                px(V, w, h, x, y - 1) + px(V, w, h, x, y + 1)) +
               (1.0f / 12.0f) * (px(V, w, h, x - 1, y - 1) + px(V, w, h, x + 1, y - 1) +
                                 px(V, w, h, x - 1, y + 1) + px(V, w, h, x + 1, y + 1));
      }
      const std::size_t o = static_cast<std::size_t>(y) * w + x;
      const float ix = sys.ix[o];
      const float iy = sys.iy[o];
      const float t = (ix * ubar + iy * vbar + sys.it[o]) / (sys.alpha2 + ix * ix + iy * iy);
      u_out[o] = ubar - ix * t;
      v_out[o] = vbar - iy * t;
    }
  }
}

void accumulate_votes(std::span<const std::uint8_t> mask, std::span<std::uint8_t> votes) {
  const std::uint8_t* m = mask.data();
  std::uint8_t* out = votes.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ssize(votes.size()); ++i) out[i] += m[i] ? 1 : 0;
}

}  // namespace omp
}  // namespace topgrid::kernels
