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

#include "topgrid/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <type_traits>

#include "topgrid/imaging.hpp"
#include "topgrid/kernels.hpp"

namespace topgrid {

void ViewConfig::validate() const {
  const bool has_h = std::holds_alternative<Homography>(calibration);
  if (kind == ViewKind::rgb && !has_h)
    throw Error("view " + std::to_string(view_id) + ": rgb view needs a homography");
  if (kind == ViewKind::depth && has_h)
    throw Error("view " + std::to_string(view_id) + ": depth view needs a pinhole camera");
}

double StageTimings::total() const {
  return foreground_ms + components_ms + gray_ms + flow_ms + edges_ms + mean_flow_ms +
         angular_ms + fill_ms + reproject_ms + fuse_ms;
}

StageTimings& StageTimings::operator+=(const StageTimings& o) {
  foreground_ms += o.foreground_ms;
  components_ms += o.components_ms;
  gray_ms += o.gray_ms;
  flow_ms += o.flow_ms;
  edges_ms += o.edges_ms;
  mean_flow_ms += o.mean_flow_ms;
  angular_ms += o.angular_ms;
  fill_ms += o.fill_ms;
  reproject_ms += o.reproject_ms;
  fuse_ms += o.fuse_ms;
  return *this;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs fn, adds its wall time to `slot`, and tags any failure with the stage.
template <typename Fn>
auto timed(const char* stage, int view_id, double& slot, Fn&& fn) {
  const auto t0 = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      slot += std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    } else {
      auto r = fn();
      slot += std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      return r;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, view_id, e.what());
  }
}

// Shared tail of both algorithms: labels, edges and flow -> reprojectable areas.
void select_areas(ViewResult& r, const GrayImage& prev, const GrayImage& curr,
                  const DetectionParams& p) {
  auto& t = r.timings;
  r.labels = timed("components", r.view_id, t.components_ms,
                   [&] { return connected_components(r.objects, p.min_area); });
  r.flow = timed("flow", r.view_id, t.flow_ms, [&] { return dense_flow(prev, curr, p.flow); });
  EdgeMap em = timed("edges", r.view_id, t.edges_ms, [&] { return canny_detect(curr, p.canny); });
  r.edges = std::move(em.edges);
  r.component_flows = timed("mean_flow", r.view_id, t.mean_flow_ms,
                            [&] { return mean_flow_per_component(r.labels, r.flow); });
  r.retained = timed("angular_threshold", r.view_id, t.angular_ms, [&] {
    return angular_threshold(r.edges, r.labels, r.component_flows, em.gx, em.gy, p.theta_max);
  });
  r.areas = timed("scanline_fill", r.view_id, t.fill_ms,
                  [&] { return scanline_fill(r.retained, r.labels); });
}

GrayImage normalized_depth(const DepthImage& d) {
  GrayImage g(d.width(), d.height());
  const float inv = 1.0f / d.max_range;
  for (std::size_t i = 0; i < g.pixel_count(); ++i) {
    const float r = d.range[i];
    // no return reads as "far"
    g[i] = r > 0.0f ? std::min(1.0f, r * inv) : 1.0f;
  }
  return g;
}

}  // namespace

ViewResult process_view_rgb(const ViewConfig& view, const ColorImage& prev,
                            const ColorImage& curr, const ColorBackground& bg,
                            const GridSpec& spec) {
  view.validate();
  if (view.kind != ViewKind::rgb) throw Error("process_view_rgb: not an rgb view");
  const auto& p = view.params;
  ViewResult r;
  r.view_id = view.view_id;
  auto& t = r.timings;

  r.objects = timed("foreground", r.view_id, t.foreground_ms, [&] {
    require_same_shape(prev, curr, "frame pair");
    return color_absdiff_mask(curr, bg.frame(), p.tau);
  });
  GrayImage g_prev, g_curr;
  timed("gray", r.view_id, t.gray_ms, [&] {
    g_prev = to_gray(prev);
    g_curr = to_gray(curr);
  });
  select_areas(r, g_prev, g_curr, p);
  r.grid = timed("reproject", r.view_id, t.reproject_ms, [&] {
    return warp_mask_to_grid(r.areas, std::get<Homography>(view.calibration), spec);
  });
  return r;
}

FrameResult fuse_views(std::vector<ViewResult> views, const GridSpec& spec, int min_votes) {
  const int n = static_cast<int>(views.size());
  if (min_votes == 0) min_votes = n;
  if (n < 1 || min_votes < 1 || min_votes > n)
    throw Error("min_votes must lie in [1, number of views]");
  if (n > 255) throw Error("at most 255 views can be fused");

  FrameResult out;
  const auto t0 = Clock::now();
  out.votes = Plane<std::uint8_t>(spec.cols, spec.rows);
  for (const auto& v : views) {
    require_same_shape(v.grid, out.votes, "fuse_views");
    kernels::omp::accumulate_votes(v.grid.data(), out.votes.data());
  }
  out.occupancy = spec.empty_mask();
  for (std::size_t i = 0; i < out.votes.pixel_count(); ++i)
    out.occupancy[i] = out.votes[i] >= min_votes ? 1 : 0;
  for (const auto& v : views) out.timings += v.timings;
  out.timings.fuse_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  out.views = std::move(views);
  return out;
}

FrameResult process_rgb_frames(const std::vector<ViewConfig>& views,
                               const std::vector<ColorImage>& frames_t,
                               const std::vector<ColorImage>& frames_prev,
                               const std::vector<ColorBackground>& backgrounds,
                               const GridSpec& spec, int min_votes) {
  const std::size_t n = views.size();
  if (n == 0 || frames_t.size() != n || frames_prev.size() != n || backgrounds.size() != n)
    throw Error("process_rgb_frames: need one frame pair and background per view");
  spec.validate();

  std::vector<ViewResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      results[i] = process_view_rgb(views[i], frames_prev[i], frames_t[i], backgrounds[i], spec);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return fuse_views(std::move(results), spec, min_votes);
}

ViewResult process_view_depth(const ViewConfig& view, const DepthImage& prev,
                              const DepthImage& curr, const DepthBackground& bg,
                              const GridSpec& spec) {
  if (view.kind != ViewKind::depth) throw Error("process_depth_frame: not a depth view");
  view.validate();
  const auto& p = view.params;
  ViewResult r;
  r.view_id = view.view_id;
  auto& t = r.timings;

  r.objects = timed("foreground", r.view_id, t.foreground_ms, [&] {
    require_same_shape(prev, curr, "frame pair");
    const DepthImage& b = bg.frame();
    require_same_shape(curr, b, "depth background");
    BinaryMask m(curr.width(), curr.height());
    for (std::size_t i = 0; i < m.pixel_count(); ++i) {
      const float c = curr.range[i];
      const float k = b.range[i];
      m[i] = c > 0.0f && k > 0.0f && std::abs(c - k) > p.tau_depth ? 1 : 0;
    }
    return m;
  });
  GrayImage g_prev, g_curr;
  timed("gray", r.view_id, t.gray_ms, [&] {
    g_prev = normalized_depth(prev);
    g_curr = normalized_depth(curr);
  });
  select_areas(r, g_prev, g_curr, p);
  r.grid = timed("reproject", r.view_id, t.reproject_ms, [&] {
    return depth_mask_to_grid(curr, r.areas, std::get<PinholeCamera>(view.calibration), spec,
                              GroundAxes::xz);
  });
  return r;
}

FrameResult process_depth_frame(const ViewConfig& view, const DepthImage& prev,
                                const DepthImage& curr, const DepthBackground& bg,
                                const GridSpec& spec) {
  std::vector<ViewResult> one;
  one.push_back(process_view_depth(view, prev, curr, bg, spec));
  return fuse_views(std::move(one), spec, 1);
}

}  // namespace topgrid
