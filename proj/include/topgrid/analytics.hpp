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
#include <vector>

#include "topgrid/features.hpp"
#include "topgrid/geometry.hpp"

namespace topgrid {

enum class CumulativeMode { full_history, sliding };

/// Per-cell time average of binary occupancy.
///
/// full_history keeps the plain cumulative moving average
///   A_t = A_{t-1} + (p_t - A_{t-1}) / t.
/// sliding averages the last t_span frames. Until the window has filled it is
/// the mean over the frames seen so far; afterwards the O(1) recurrence
///   A_t = A_{t-1} - p_{t-t_span} / t_span + p_t / t_span
/// is applied, and every kResyncInterval updates the values are recomputed
/// exactly from the stored window to cancel accumulated rounding.
class CumulativeGrid {
 public:
  static constexpr int kResyncInterval = 1024;

  CumulativeGrid(const GridSpec& spec, CumulativeMode mode, int t_span = 0);

  void update(const BinaryMask& occupancy);

  const GridSpec& spec() const { return spec_; }
  CumulativeMode mode() const { return mode_; }
  int t_span() const { return t_span_; }
  long frames() const { return t_; }
  const std::vector<double>& values() const { return values_; }
  double value(int col, int row) const {
    return values_[static_cast<std::size_t>(row) * spec_.cols + col];
  }
  /// Occupancy frames currently inside the sliding window, oldest first.
  const std::deque<BinaryMask>& window() const { return ring_; }

 private:
  void resync();

  GridSpec spec_;
  CumulativeMode mode_;
  int t_span_;
  long t_ = 0;
  long since_resync_ = 0;
  std::vector<double> values_;
  std::deque<BinaryMask> ring_;
  std::vector<std::int32_t> window_count_;  // exact occupied-frame count per cell
};

inline CumulativeGrid update_cumulative(CumulativeGrid grid, const BinaryMask& occupancy) {
  grid.update(occupancy);
  return grid;
}

/// Dense flow between two occupancy masks, in cells per frame. Each mask is
/// turned into a 0/1 raster and smoothed with sigma = 1 before the solver.
FlowField topview_flow(const BinaryMask& prev_occ, const BinaryMask& curr_occ,
                       const FlowParams& params);

struct SaturatedCell {
  int col = 0;
  int row = 0;
  double value = 0.0;
};

struct SaturationCluster {
  int area = 0;           // cells
  double centroid_col = 0.0;
  double centroid_row = 0.0;
  Vec2 centroid_world;    // ground coordinates of the centroid
};

struct SaturationReport {
  std::vector<SaturatedCell> cells;
  std::vector<SaturationCluster> clusters;
};

/// Cells with value >= s_min, grouped into 8-connected clusters of at least
/// min_cluster cells. Cells of dropped clusters are not reported.
SaturationReport saturation_query(const CumulativeGrid& grid, double s_min, int min_cluster);

inline constexpr double kDefaultSaturation = 0.8;
inline constexpr int kDefaultMinCluster = 4;

}  // namespace topgrid
