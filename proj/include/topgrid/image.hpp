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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "topgrid/error.hpp"

namespace topgrid {

/// Row-major interleaved raster. Every pipeline buffer is one of these, so the
/// kernels only ever see a width, a height and a flat span.
template <typename T, int Channels = 1>
class Plane {
 public:
  using value_type = T;
  static constexpr int channels = Channels;

  Plane() = default;
  Plane(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error("negative raster dimensions");
    data_.assign(static_cast<std::size_t>(width) * height * Channels, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  bool empty() const { return data_.empty(); }

  T& at(int x, int y, int c = 0) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }
  const T& at(int x, int y, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  template <typename U, int C>
  bool same_shape(const Plane<U, C>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using GrayImage = Plane<float>;       // intensities in [0,1]
using GradientImage = Plane<float>;   // signed derivative responses
using ColorImage = Plane<float, 3>;   // RGB, channels in [0,1]
using BinaryMask = Plane<std::uint8_t>;

/// Range image in meters; 0 marks "no return".
struct DepthImage {
  Plane<float> range;
  float max_range = 5.0f;

  int width() const { return range.width(); }
  int height() const { return range.height(); }
  bool valid(int x, int y) const { return range.at(x, y) > 0.0f; }
  friend bool operator==(const DepthImage&, const DepthImage&) = default;
};

struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Component {
  int label = 0;
  int pixel_count = 0;
  BoundingBox box;
  friend bool operator==(const Component&, const Component&) = default;
};

/// Dense 1..K labeling; components[k-1] describes label k.
struct LabelImage {
  Plane<std::int32_t> labels;
  std::vector<Component> components;

  int width() const { return labels.width(); }
  int height() const { return labels.height(); }
  int count() const { return static_cast<int>(components.size()); }
};

/// Per-pixel displacement in pixels (or grid cells) per frame.
struct FlowField {
  Plane<float> u;
  Plane<float> v;

  FlowField() = default;
  FlowField(int width, int height) : u(width, height), v(width, height) {}
  int width() const { return u.width(); }
  int height() const { return u.height(); }
};

inline void require_same_shape(int w0, int h0, int w1, int h1,
                               const char* what) {
  if (w0 != w1 || h0 != h1) throw DimensionError(what, w0, h0, w1, h1);
}

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
  require_same_shape(a.width(), a.height(), b.width(), b.height(), what);
}

}  // namespace topgrid
