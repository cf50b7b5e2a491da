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

#include <utility>
#include <vector>

#include "topgrid/image.hpp"

namespace topgrid {

/// Rec. 601 luma, clamped to [0,1].
GrayImage to_gray(const ColorImage& img);

/// True where the Euclidean RGB distance to the background exceeds tau.
BinaryMask color_absdiff_mask(const ColorImage& img, const ColorImage& bg, float tau);

/// Normalised 1-D Gaussian taps with radius ceil(3*sigma).
std::vector<float> gaussian_kernel(double sigma);

/// Separable Gaussian blur, clamp-to-edge borders. Throws for sigma <= 0.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Unnormalised 3x3 Sobel responses (the [-1 0 1] x [1 2 1] pair).
/// Throws if the image is smaller than 3x3.
std::pair<GradientImage, GradientImage> sobel_gradients(const GrayImage& img);

}  // namespace topgrid
