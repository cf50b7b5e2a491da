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

#include <numbers>
#include <vector>

#include "topgrid/image.hpp"

namespace topgrid {

struct CannyParams {
  double low = 0.04;   // hysteresis thresholds on |grad|, see canny()
  double high = 0.10;
  double sigma = 1.4;
};

/// Edge mask plus the gradients it was computed from; the angular threshold
/// reuses the gradients so both see the same smoothing.
struct EdgeMap {
  BinaryMask edges;
  GradientImage gx;
  GradientImage gy;
};

/// Classic Canny. Gradient magnitude is the Sobel response divided by 4, so a
/// sharp unit step in intensity has magnitude 1. Requires 0 < low < high.
EdgeMap canny_detect(const GrayImage& img, const CannyParams& params);
BinaryMask canny(const GrayImage& img, double low, double high, double sigma);

/// 8-connected labeling. Components under min_area pixels are dropped and
/// the survivors numbered 1..K in raster order of their first pixel.
LabelImage connected_components(const BinaryMask& mask, int min_area);

struct FlowParams {
  double alpha = 10.0;  // smoothness weight on the 8-bit intensity scale
  int iterations = 100;
  int pyramid_levels = 3;
  double presmooth_sigma = 1.0;
};

/// Coarse-to-fine Horn-Schunck. At each level the current image is warped by
/// the upsampled flow and `iterations` Jacobi sweeps refine it.
FlowField dense_flow(const GrayImage& prev, const GrayImage& curr, const FlowParams& params);

struct ComponentFlow {
  int label = 0;
  double mean_u = 0.0;
  double mean_v = 0.0;
  int pixel_count = 0;
};

/// Arithmetic mean of the flow over each labelled component, sorted by label.
std::vector<ComponentFlow> mean_flow_per_component(const LabelImage& labels,
                                                   const FlowField& flow);

/// Components moving slower than this keep all of their edges.
inline constexpr double kStationaryFlow = 0.1;
inline constexpr double kDefaultThetaMax = 20.0 * std::numbers::pi / 180.0;

/// Keeps edge pixels of labelled components whose edge tangent is within
/// theta_max (mod pi) of the component's mean flow direction.
BinaryMask angular_threshold(const BinaryMask& edges, const LabelImage& labels,
                             const std::vector<ComponentFlow>& flows, const GradientImage& gx,
                             const GradientImage& gy, double theta_max);

/// Per component and row, fills between the outermost retained pixels when
/// the row holds at least two of them. Only pixels of that component are set.
BinaryMask scanline_fill(const BinaryMask& retained, const LabelImage& labels);

}  // namespace topgrid
