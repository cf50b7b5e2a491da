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

// Serial reference kernels. Written for obviousness: every access goes through
// the clamping accessor. Do not optimise these; kernels_omp.cpp is the fast path.

#include <algorithm>
#include <cstddef>

#include "topgrid/kernels.hpp"

namespace topgrid::kernels::ref {
namespace {

inline float px(std::span<const float> img, int width, int height, int x, int y) {
  x = std::clamp(x, 0, width - 1);
  y = std::clamp(y, 0, height - 1);
  return img[static_cast<std::size_t>(y) * width + x];
}

}  // namespace

void to_gray(std::span<const float> rgb, std::span<float> gray) {
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const float g = 0.299f * rgb[3 * i] + 0.587f * rgb[3 * i + 1] + 0.114f * rgb[3 * i + 2];
    gray[i] = std::clamp(g, 0.0f, 1.0f);
  }
}

void rgb_distance_mask(std::span<const float> img, std::span<const float> bg, float tau,
                       std::span<std::uint8_t> out) {
  const float tau2 = tau * tau;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const float dr = img[3 * i] - bg[3 * i];
    const float dg = img[3 * i + 1] - bg[3 * i + 1];
    const float db = img[3 * i + 2] - bg[3 * i + 2];
    out[i] = (dr * dr + dg * dg + db * db) > tau2 ? 1 : 0;
  }
}

void convolve_rows(std::span<const float> src, std::span<float> dst, int width, int height,
                   std::span<const float> taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      float acc = 0.0f;
      for (int k = -r; k <= r; ++k) acc += taps[k + r] * px(src, width, height, x + k, y);
      dst[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
}

void convolve_cols(std::span<const float> src, std::span<float> dst, int width, int height,
                   std::span<const float> taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      float acc = 0.0f;
      for (int k = -r; k <= r; ++k) acc += taps[k + r] * px(src, width, height, x, y + k);
      dst[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
}

void sobel(std::span<const float> src, std::span<float> gx, std::span<float> gy, int width,
           int height) {
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const float a = px(src, width, height, x - 1, y - 1);
      const float b = px(src, width, height, x, y - 1);
      const float c = px(src, width, height, x + 1, y - 1);
      const float d = px(src, width, height, x - 1, y);
      const float f = px(src, width, height, x + 1, y);
      const float g = px(src, width, height, x - 1, y + 1);
      const float h = px(src, width, height, x, y + 1);
      const float i = px(src, width, height, x + 1, y + 1);
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
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float ubar =
          (1.0f / 6.0f) * (px(u, w, h, x - 1, y) + px(u, w, h, x + 1, y) +
                           px(u, w, h, x, y - 1) + px(u, w, h, x, y + 1)) +
          (1.0f / 12.0f) * (px(u, w, h, x - 1, y - 1) + px(u, w, h, x + 1, y - 1) +
                            px(u, w, h, x - 1, y + 1) + px(u, w, h, x + 1, y + 1));
      const float vbar =
          (1.0f / 6.0f) * (px(v, w, h, x - 1, y) + px(v, w, h, x + 1, y) +
                           px(v, w, h, x, y - 1) + px(v, w, h, x, y + 1)) +
          (1.0f / 12.0f) * (px(v, w, h, x - 1, y - 1) + px(v, w, h, x + 1, y - 1) +
                            px(v, w, h, x - 1, y + 1) + px(v, w, h, x + 1, y + 1));
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
  for (std::size_t i = 0; i < votes.size(); ++i) votes[i] += mask[i] ? 1 : 0;
}

}  // namespace topgrid::kernels::ref
