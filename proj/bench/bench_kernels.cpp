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

// Serial reference kernels against their OpenMP counterparts on
// camera-sized rasters. The thread count follows TOPGRID_THREADS or the
// OpenMP default.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "topgrid/app.hpp"
#include "topgrid/imaging.hpp"
#include "topgrid/kernels.hpp"

namespace {

namespace k = topgrid::kernels;

constexpr int kW = 320;
constexpr int kH = 240;

std::vector<float> noise(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> d(0.0f, 1.0f);
  std::vector<float> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

template <auto Fn>
void BM_convolve(benchmark::State& state) {
  const auto src = noise(kW * kH, 1);
  std::vector<float> dst(src.size());
  const auto taps = topgrid::gaussian_kernel(1.4);
  for (auto _ : state) {
    Fn(src, dst, kW, kH, taps);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetItemsProcessed(state.iterations() * kW * kH);
}

template <auto Fn>
void BM_sobel(benchmark::State& state) {
  const auto src = noise(kW * kH, 2);
  std::vector<float> gx(src.size()), gy(src.size());
  for (auto _ : state) {
    Fn(src, gx, gy, kW, kH);
    benchmark::DoNotOptimize(gx.data());
  }
  state.SetItemsProcessed(state.iterations() * kW * kH);
}

template <auto Fn>
void BM_hs_sweep(benchmark::State& state) {
  const auto ix = noise(kW * kH, 3), iy = noise(kW * kH, 4), it = noise(kW * kH, 5);
  std::vector<float> u(ix.size()), v(ix.size()), u2(ix.size()), v2(ix.size());
  const k::HsSystem sys{ix, iy, it, 100.0f, kW, kH};
  for (auto _ : state) {
    Fn(sys, u, v, u2, v2);
    benchmark::DoNotOptimize(u2.data());
  }
  state.SetItemsProcessed(state.iterations() * kW * kH);
}

template <auto Fn>
void BM_rgb_distance(benchmark::State& state) {
  const auto a = noise(3 * kW * kH, 6), b = noise(3 * kW * kH, 7);
  std::vector<std::uint8_t> out(kW * kH);
  for (auto _ : state) {
    Fn(a, b, 0.15f, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * kW * kH);
}

BENCHMARK(BM_convolve<k::ref::convolve_rows>)->Name("convolve_rows/ref");
BENCHMARK(BM_convolve<k::omp::convolve_rows>)->Name("convolve_rows/omp");
BENCHMARK(BM_convolve<k::ref::convolve_cols>)->Name("convolve_cols/ref");
BENCHMARK(BM_convolve<k::omp::convolve_cols>)->Name("convolve_cols/omp");
BENCHMARK(BM_sobel<k::ref::sobel>)->Name("sobel/ref");
BENCHMARK(BM_sobel<k::omp::sobel>)->Name("sobel/omp");
BENCHMARK(BM_hs_sweep<k::ref::hs_sweep>)->Name("hs_sweep/ref");
BENCHMARK(BM_hs_sweep<k::omp::hs_sweep>)->Name("hs_sweep/omp");
BENCHMARK(BM_rgb_distance<k::ref::rgb_distance_mask>)->Name("rgb_distance/ref");
BENCHMARK(BM_rgb_distance<k::omp::rgb_distance_mask>)->Name("rgb_distance/omp");

}  // namespace

int main(int argc, char** argv) {
  topgrid::app::apply_threads(0);
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
