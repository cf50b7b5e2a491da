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

// Run configuration: flat "key = value" lines grouped under [section]
// headers, '#' comments. Views live in [view.N] sections. Relative paths
// resolve against the directory holding the config file.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "topgrid/analytics.hpp"
#include "topgrid/pipeline.hpp"

namespace topgrid::io {

struct ViewSource {
  int id = 0;
  ViewKind kind = ViewKind::rgb;
  std::filesystem::path calibration;
  std::string frames;                 // path pattern with one %d / %0Nd field
  std::filesystem::path background;   // required when background mode is "frame"
  float max_range = 5.0f;             // depth views

  std::filesystem::path frame_path(int index) const;
};

struct RunConfig {
  int frame_count = 0;
  std::filesystem::path output;
  int threads = 0;  // 0 = leave the OpenMP default
  int min_votes = 0;
  GridSpec grid;
  BackgroundMode background = BackgroundMode::user_frame;
  int background_window = 50;
  DetectionParams rgb = DetectionParams::rgb_defaults();
  DetectionParams depth = DetectionParams::depth_defaults();
  CumulativeMode cumulative = CumulativeMode::sliding;
  int t_span = 100;
  double s_min = kDefaultSaturation;
  int min_cluster = kDefaultMinCluster;
  FlowParams topview_flow;
  std::vector<ViewSource> views;

  const DetectionParams& params_for(ViewKind kind) const {
    return kind == ViewKind::rgb ? rgb : depth;
  }
};

/// Parses and range-checks; paths resolve against base_dir but are not
/// checked. Throws Error naming the offending line.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
/// parse_config on the file, then verifies every referenced input exists.
RunConfig load_config(const std::filesystem::path& path);
/// Throws Error naming the first missing input file.
void check_inputs(const RunConfig& config);

/// Serialises with paths written relative to base_dir where possible.
std::string format_config(const RunConfig& config, const std::filesystem::path& base_dir);

/// Expands the single printf-style integer field of a frame pattern.
std::string expand_pattern(std::string_view pattern, int index);

}  // namespace topgrid::io
