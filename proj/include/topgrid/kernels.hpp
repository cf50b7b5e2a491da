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

// Hot per-pixel loops of the pipeline, in two flavours with identical
// signatures:
//
//   kernels::ref  plain serial loops, the reference the tests compare against
//   kernels::omp  OpenMP row-parallel versions used by the pipeline
//
// Both evaluate the same floating point expressions in the same order per
// output element, so their results are bit-identical for any thread count.
// All borders are clamp-to-edge.

#pragma once

#include <cstdint>
#include <span>

namespace topgrid::kernels {

/// Inputs shared by one Jacobi sweep of the Horn-Schunck solver.
struct HsSystem {
  std::span<const float> ix;  // spatial derivatives
  std::span<const float> iy;
  std::span<const float> it;  // linearised temporal residual
  float alpha2 = 1.0f;        // squared smoothness weight
  int width = 0;
  int height = 0;
};

#define TOPGRID_KERNEL_DECLS                                                  \
  void to_gray(std::span<const float> rgb, std::span<float> gray);            \
  void rgb_distance_mask(std::span<const float> img, std::span<const float> bg, \
                         float tau, std::span<std::uint8_t> out);            \
  void convolve_rows(std::span<const float> src, std::span<float> dst,        \
                     int width, int height, std::span<const float> taps);     \
  void convolve_cols(std::span<const float> src, std::span<float> dst,        \
                     int width, int height, std::span<const float> taps);     \
  void sobel(std::span<const float> src, std::span<float> gx,                 \
             std::span<float> gy, int width, int height);                     \
  void hs_sweep(const HsSystem& sys, std::span<const float> u,                \
                std::span<const float> v, std::span<float> u_out,             \
                std::span<float> v_out);                                      \
  void accumulate_votes(std::span<const std::uint8_t> mask,                   \
                        std::span<std::uint8_t> votes);

namespace ref {
TOPGRID_KERNEL_DECLS
}  // namespace ref

namespace omp {
TOPGRID_KERNEL_DECLS
}  // namespace omp

#undef TOPGRID_KERNEL_DECLS

/// Number of worker threads the omp kernels use; 0 leaves the OpenMP default.
void set_thread_count(int threads);
int thread_count();

}  // namespace topgrid::kernels
