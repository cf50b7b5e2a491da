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

// Application layer behind the CLI: a per-sequence Session that owns the
// background models and the cumulative grid, plus the run / synth / bench
// entry points.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "topgrid/analytics.hpp"
#include "topgrid/io/config.hpp"
#include "topgrid/pipeline.hpp"
#include "topgrid/synthgen.hpp"

namespace topgrid::app {

using ViewFrame = std::variant<ColorImage, DepthImage>;

/// TOPGRID_THREADS wins over the configured value; 0 leaves OpenMP alone.
int effective_threads(int configured);
void apply_threads(int configured);

struct StepResult {
  FrameResult frame;
  FlowField topview_flow;      // cells per frame, previous -> current occupancy
  SaturationReport saturation;
  double analytics_ms = 0.0;
};

/// Feeds one sequence through the pipeline and the analytics. The first
/// frame is paired with itself.
class Session {
 public:
  /// backgrounds: one per view in user_frame mode, ignored otherwise.
  Session(const io::RunConfig& config, std::vector<Calibration> calibrations,
          std::vector<ViewFrame> backgrounds = {});

  StepResult step(std::vector<ViewFrame> frames);

  const CumulativeGrid& cumulative() const { return cumulative_; }
  int frames_processed() const { return frames_; }
  void set_topview_flow(bool on) { topview_flow_ = on; }

 private:
  io::RunConfig config_;
  std::vector<ViewConfig> views_;
  std::vector<ColorBackground> color_bg_;
  std::vector<DepthBackground> depth_bg_;
  std::vector<ViewFrame> prev_;
  BinaryMask prev_occupancy_;
  CumulativeGrid cumulative_;
  int frames_ = 0;
  bool topview_flow_ = true;
};

ViewFrame load_frame(const io::ViewSource& view, const std::filesystem::path& path);

/// Fixed-order key=value line per frame.
struct MetricsRecord {
  int frame = 0;
  double decode_ms = 0.0;
  StageTimings stages;
  double analytics_ms = 0.0;
  double total_ms = 0.0;
  int occupied_cells = 0;
  double fps = 0.0;  // frames so far / elapsed wall time
  int clusters = 0;
};
std::string format_metrics(const MetricsRecord& m);

/// Blue ramp: value v in [0,1] -> (0, 0, round(255 v)).
Plane<std::uint8_t, 3> cumulative_heatmap(const CumulativeGrid& grid);
/// HSV with hue = direction, saturation = |flow| / 2 clamped, value = 1.
Plane<std::uint8_t, 3> flow_visual(const FlowField& flow);

/// Executes a loaded config, writing rasters and metrics.log into
/// config.output. Throws Error("frame N: ...") on the first failing frame.
void run(const io::RunConfig& config, std::ostream* progress = nullptr);

/// Run configuration matching a scenario (paths left empty).
io::RunConfig scenario_config(const synth::Scenario& s);
std::vector<Calibration> scenario_calibrations(const synth::Scenario& s);
std::vector<ViewFrame> scenario_backgrounds(const synth::Scenario& s);
std::vector<ViewFrame> scenario_frames(const synth::Scenario& s, int t);

/// Materialises frames, calibrations, ground truth, scenario.json and a
/// ready-to-run config.ini under `out`.
void synth(const synth::Scenario& s, const std::filesystem::path& out);

struct BenchReport {
  int warmup = 0;
  int measure = 0;
  int repeats = 3;
  double noop_fps = 0.0;      // median over repeats; frame decode only
  double pipeline_fps = 0.0;  // median over repeats; decode + pipeline + analytics
  StageTimings stage_mean_ms;
  double analytics_mean_ms = 0.0;
  bool realtime = false;      // pipeline_fps >= kRealtimeFps
};
inline constexpr double kRealtimeFps = 10.0;

BenchReport bench(const io::RunConfig& config, int warmup, int measure);
std::string format_bench(const BenchReport& r);

}  // namespace topgrid::app
