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

#include <cstdint>
#include <deque>
#include <optional>
#include <variant>
#include <vector>

#include "topgrid/features.hpp"
#include "topgrid/geometry.hpp"
#include "topgrid/image.hpp"

namespace topgrid {

// ---------------------------------------------------------------------------
// Background model

enum class BackgroundMode { user_frame, running_mean };

namespace detail {
inline std::span<const float> samples(const ColorImage& img) { return img.data(); }
inline std::span<const float> samples(const DepthImage& img) { return img.range.data(); }
inline std::span<float> samples(ColorImage& img) { return img.data(); }
inline std::span<float> samples(DepthImage& img) { return img.range.data(); }
inline bool sample_valid(const ColorImage&, float) { return true; }
inline bool sample_valid(const DepthImage&, float v) { return v > 0.0f; }
}  // namespace detail

/// Either a frame supplied by the user or the mean of the last T frames.
/// For depth images the running mean skips invalid (zero) samples per pixel.
template <typename Image>
class BackgroundModel {
 public:
  static BackgroundModel user_frame(Image frame) {
    BackgroundModel m;
    m.mode_ = BackgroundMode::user_frame;
    m.frame_ = std::move(frame);
    m.accumulated_ = 1;
    m.window_ = 1;
    return m;
  }

  static BackgroundModel running_mean(int window) {
    if (window < 1) throw Error("background window must be at least one frame");
    BackgroundModel m;
    m.mode_ = BackgroundMode::running_mean;
    m.window_ = window;
    return m;
  }

  BackgroundMode mode() const { return mode_; }
  int window() const { return window_; }
  int frames_accumulated() const { return accumulated_; }
  bool ready() const { return accumulated_ > 0; }

  const Image& frame() const {
    if (!ready()) throw Error("background model has not seen a frame yet");
    return frame_;
  }

  void update(const Image& img) {
    if (ready()) require_same_shape(img, frame_, "update_background");
    if (mode_ == BackgroundMode::user_frame) return;

    const auto in = detail::samples(img);
    if (!ready()) {
      frame_ = img;
      sum_.assign(in.size(), 0.0);
      count_.assign(in.size(), 0);
    }
    if (static_cast<int>(ring_.size()) == window_) {
      const auto& old = ring_.front();
      for (std::size_t i = 0; i < old.size(); ++i) {
        if (detail::sample_valid(img, old[i])) {
          sum_[i] -= old[i];
          --count_[i];
        }
      }
      ring_.pop_front();
    }
    ring_.emplace_back(in.begin(), in.end());
    auto out = detail::samples(frame_);
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (detail::sample_valid(img, in[i])) {
        sum_[i] += in[i];
        ++count_[i];
      }
      out[i] = count_[i] > 0 ? static_cast<float>(sum_[i] / count_[i]) : 0.0f;
    }
    accumulated_ = static_cast<int>(ring_.size());
  }

 private:
  BackgroundMode mode_ = BackgroundMode::running_mean;
  int window_ = 1;
  int accumulated_ = 0;
  Image frame_;
  std::deque<std::vector<float>> ring_;
  std::vector<double> sum_;
  std::vector<int> count_;
};

using ColorBackground = BackgroundModel<ColorImage>;
using DepthBackground = BackgroundModel<DepthImage>;

template <typename Image>
BackgroundModel<Image> update_background(BackgroundModel<Image> model, const Image& frame) {
  model.update(frame);
  return model;
}

// ---------------------------------------------------------------------------
// Per-view configuration and results

enum class ViewKind { rgb, depth };

struct DetectionParams {
  float tau = 0.15f;        // RGB distance threshold, colour channels in [0,1]
  float tau_depth = 0.15f;  // meters
  int min_area = 50;
  CannyParams canny;
  double theta_max = kDefaultThetaMax;
  FlowParams flow;

  static DetectionParams rgb_defaults() { return {}; }
  static DetectionParams depth_defaults() {
    DetectionParams p;
    p.min_area = 25;
    return p;
  }
};

using Calibration = std::variant<Homography, PinholeCamera>;

struct ViewConfig {
  int view_id = 0;
  ViewKind kind = ViewKind::rgb;
  Calibration calibration;
  DetectionParams params;

  /// Throws unless the calibration kind matches the view kind.
  void validate() const;
};

struct StageTimings {
  double foreground_ms = 0.0;
  double components_ms = 0.0;
  double gray_ms = 0.0;
  double flow_ms = 0.0;
  double edges_ms = 0.0;
  double mean_flow_ms = 0.0;
  double angular_ms = 0.0;
  double fill_ms = 0.0;
  double reproject_ms = 0.0;
  double fuse_ms = 0.0;

  double total() const;
  StageTimings& operator+=(const StageTimings& o);
};

struct ViewResult {
  int view_id = 0;
  BinaryMask objects;   // foreground before labeling
  LabelImage labels;
  BinaryMask edges;
  BinaryMask retained;  // edges surviving the angular threshold
  BinaryMask areas;     // scanline-filled regions that get reprojected
  FlowField flow;
  std::vector<ComponentFlow> component_flows;
  BinaryMask grid;      // this view's top-view mask
  StageTimings timings;
};

struct FrameResult {
  std::vector<ViewResult> views;
  Plane<std::uint8_t> votes;  // per cell, number of views marking it
  BinaryMask occupancy;       // votes >= min_votes
  StageTimings timings;       // summed over views, plus fusion
};

ViewResult process_view_rgb(const ViewConfig& view, const ColorImage& prev,
                            const ColorImage& curr, const ColorBackground& bg,
                            const GridSpec& spec);

/// Runs every view (in parallel when there are several) and fuses the grid
/// masks by voting. min_votes = 0 means "all views", the strict intersection.
FrameResult process_rgb_frames(const std::vector<ViewConfig>& views,
                               const std::vector<ColorImage>& frames_t,
                               const std::vector<ColorImage>& frames_prev,
                               const std::vector<ColorBackground>& backgrounds,
                               const GridSpec& spec, int min_votes = 0);

ViewResult process_view_depth(const ViewConfig& view, const DepthImage& prev,
                              const DepthImage& curr, const DepthBackground& bg,
                              const GridSpec& spec);

/// Single depth sensor: the backprojected footprint needs no intersection.
FrameResult process_depth_frame(const ViewConfig& view, const DepthImage& prev,
                                const DepthImage& curr, const DepthBackground& bg,
                                const GridSpec& spec);

/// Sums per-view grid masks and thresholds the vote count.
FrameResult fuse_views(std::vector<ViewResult> views, const GridSpec& spec, int min_votes);

}  // namespace topgrid
