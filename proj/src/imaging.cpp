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

#include "topgrid/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "topgrid/kernels.hpp"

namespace topgrid {

GrayImage to_gray(const ColorImage& img) {
  GrayImage out(img.width(), img.height());
  kernels::omp::to_gray(img.data(), out.data());
  return out;
}

BinaryMask color_absdiff_mask(const ColorImage& img, const ColorImage& bg, float tau) {
  require_same_shape(img, bg, "color_absdiff_mask");
  BinaryMask out(img.width(), img.height());
  kernels::omp::rgb_distance_mask(img.data(), bg.data(), tau, out.data());
  return out;
}

std::vector<float> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw Error("gaussian sigma must be positive");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * r + 1);
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    w[k + r] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += w[k + r];
  }
  std::vector<float> taps(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) taps[i] = static_cast<float>(w[i] / sum);
  return taps;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
  const auto taps = gaussian_kernel(sigma);
  GrayImage tmp(img.width(), img.height());
  GrayImage out(img.width(), img.height());
  if (img.empty()) return out;
  kernels::omp::convolve_rows(img.data(), tmp.data(), img.width(), img.height(), taps);
  kernels::omp::convolve_cols(tmp.data(), out.data(), img.width(), img.height(), taps);
  // float taps sum to 1 only up to rounding
  for (float& v : out.data()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

std::pair<GradientImage, GradientImage> sobel_gradients(const GrayImage& img) {
  if (img.width() < 3 || img.height() < 3) throw Error("sobel_gradients: image smaller than 3x3");
  GradientImage gx(img.width(), img.height());
  GradientImage gy(img.width(), img.height());
  kernels::omp::sobel(img.data(), gx.data(), gy.data(), img.width(), img.height());
  return {std::move(gx), std::move(gy)};
}

}  // namespace topgrid
