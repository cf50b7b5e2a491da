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

#include "topgrid/analytics.hpp"

#include <algorithm>

#include "topgrid/imaging.hpp"

namespace topgrid {

CumulativeGrid::CumulativeGrid(const GridSpec& spec, CumulativeMode mode, int t_span)
    : spec_(spec), mode_(mode), t_span_(t_span) {
  spec_.validate();
  if (mode_ == CumulativeMode::sliding && t_span_ < 1)
    throw Error("sliding cumulative grid needs t_span >= 1");
  const std::size_t n = static_cast<std::size_t>(spec_.cols) * spec_.rows;
  values_.assign(n, 0.0);
  if (mode_ == CumulativeMode::sliding) window_count_.assign(n, 0);
}

void CumulativeGrid::update(const BinaryMask& occupancy) {
  if (occupancy.width() != spec_.cols || occupancy.height() != spec_.rows)
    throw DimensionError("update_cumulative", occupancy.width(), occupancy.height(),
                         spec_.cols, spec_.rows);
  ++t_;
  const std::size_t n = values_.size();

  if (mode_ == CumulativeMode::full_history) {
    const double inv_t = 1.0 / static_cast<double>(t_);
    for (std::size_t i = 0; i < n; ++i)
      values_[i] += ((occupancy[i] ? 1.0 : 0.0) - values_[i]) * inv_t;
    return;
  }

  ring_.push_back(occupancy);
  for (std::size_t i = 0; i < n; ++i)
    if (occupancy[i]) ++window_count_[i];

  if (t_ <= t_span_) {
    const double inv_t = 1.0 / static_cast<double>(t_);
    for (std::size_t i = 0; i < n; ++i)
      values_[i] += ((occupancy[i] ? 1.0 : 0.0) - values_[i]) * inv_t;
  } else {
    const BinaryMask& old = ring_.front();
    const double inv_span = 1.0 / static_cast<double>(t_span_);
    for (std::size_t i = 0; i < n; ++i) {
      if (old[i]) --window_count_[i];
      values_[i] = values_[i] - (old[i] ? inv_span : 0.0) + (occupancy[i] ? inv_span : 0.0);
      values_[i] = std::clamp(values_[i], 0.0, 1.0);
    }
    ring_.pop_front();
  }
  if (++since_resync_ >= kResyncInterval) resync();
}

void CumulativeGrid::resync() {
  since_resync_ = 0;
  const double denom = static_cast<double>(std::min<long>(t_, t_span_));
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = window_count_[i] / denom;
}

FlowField topview_flow(const BinaryMask& prev_occ, const BinaryMask& curr_occ,
                       const FlowParams& params) {
  require_same_shape(prev_occ, curr_occ, "topview_flow");
  auto raster = [](const BinaryMask& m) {
    GrayImage g(m.width(), m.height());
    for (std::size_t i = 0; i < g.pixel_count(); ++i) g[i] = m[i] ? 1.0f : 0.0f;
    return gaussian_blur(g, 1.0);
  };
  return dense_flow(raster(prev_occ), raster(curr_occ), params);
}

SaturationReport saturation_query(const CumulativeGrid& grid, double s_min, int min_cluster) {
  if (!(s_min > 0.0 && s_min <= 1.0)) throw Error("saturation_query: s_min must lie in (0, 1]");
  const GridSpec& spec = grid.spec();
  BinaryMask hot = spec.empty_mask();
  for (std::size_t i = 0; i < hot.pixel_count(); ++i)
    hot[i] = grid.values()[i] >= s_min ? 1 : 0;

  const LabelImage lab = connected_components(hot, std::max(1, min_cluster));
  SaturationReport report;
  std::vector<double> sc(lab.count() + 1, 0.0), sr(lab.count() + 1, 0.0);
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const int l = lab.labels.at(c, r);
      if (l == 0) continue;
      report.cells.push_back({c, r, grid.value(c, r)});
      sc[l] += c;
      sr[l] += r;
    }
  }
  for (const auto& comp : lab.components) {
    SaturationCluster cl;
    cl.area = comp.pixel_count;
    cl.centroid_col = sc[comp.label] / comp.pixel_count;
    cl.centroid_row = sr[comp.label] / comp.pixel_count;
    cl.centroid_world = {spec.origin_x + (cl.centroid_col + 0.5) * spec.cell_size,
                         spec.origin_y + (cl.centroid_row + 0.5) * spec.cell_size};
    report.clusters.push_back(cl);
  }
  return report;
}

}  // namespace topgrid
