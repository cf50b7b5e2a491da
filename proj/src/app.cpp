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

#include "topgrid/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>

#include "topgrid/io/calibration.hpp"
#include "topgrid/io/netpbm.hpp"
#include "topgrid/kernels.hpp"

namespace topgrid::app {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::vector<Calibration> load_calibrations(const io::RunConfig& c) {
  std::vector<Calibration> out;
  for (const auto& v : c.views) {
    try {
      out.push_back(io::parse_calibration(io::read_file(v.calibration)));
    } catch (const std::exception& e) {
      throw Error(v.calibration.string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<ViewFrame> load_backgrounds(const io::RunConfig& c) {
  std::vector<ViewFrame> out;
  if (c.background != BackgroundMode::user_frame) return out;
  for (const auto& v : c.views) out.push_back(load_frame(v, v.background));
  return out;
}

std::vector<ViewFrame> load_frames(const io::RunConfig& c, int t) {
  std::vector<ViewFrame> out;
  out.reserve(c.views.size());
  for (const auto& v : c.views) out.push_back(load_frame(v, v.frame_path(t)));
  return out;
}

std::array<std::uint8_t, 3> hsv_to_rgb(double h, double s) {
  const double c = s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else { r = c; b = x; }
  const double m = 1.0 - c;
  auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  return {q(r + m), q(g + m), q(b + m)};
}

double median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

int effective_threads(int configured) {
  if (const char* env = std::getenv("TOPGRID_THREADS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024)
      throw Error("TOPGRID_THREADS must be an integer in [1, 1024]");
    return static_cast<int>(n);
  }
  return configured;
}

void apply_threads(int configured) {
  const int n = effective_threads(configured);
  if (n > 0) kernels::set_thread_count(n);
}

// ---------------------------------------------------------------------------
// Session

Session::Session(const io::RunConfig& config, std::vector<Calibration> calibrations,
                 std::vector<ViewFrame> backgrounds)
    : config_(config), cumulative_(config.grid, config.cumulative, config.t_span) {
  const std::size_t n = config.views.size();
  if (n == 0) throw Error("session needs at least one view");
  if (calibrations.size() != n) throw Error("session needs one calibration per view");
  const bool user = config.background == BackgroundMode::user_frame;
  if (user && backgrounds.size() != n) throw Error("session needs one background per view");

  for (std::size_t i = 0; i < n; ++i) {
    const auto& src = config.views[i];
    ViewConfig v{src.id, src.kind, std::move(calibrations[i]), config.params_for(src.kind)};
    v.validate();
    views_.push_back(std::move(v));
    if (src.kind == ViewKind::rgb) {
      color_bg_.push_back(user ? ColorBackground::user_frame(std::get<ColorImage>(backgrounds[i]))
                               : ColorBackground::running_mean(config.background_window));
    } else {
      depth_bg_.push_back(user ? DepthBackground::user_frame(std::get<DepthImage>(backgrounds[i]))
                               : DepthBackground::running_mean(config.background_window));
    }
  }
  if (!color_bg_.empty() && !depth_bg_.empty()) throw Error("rgb and depth views cannot be mixed");
  if (!depth_bg_.empty() && depth_bg_.size() != 1) throw Error("depth sessions take one view");
}

StepResult Session::step(std::vector<ViewFrame> frames) {
  if (frames.size() != views_.size()) throw Error("expected one frame per view");
  if (frames_ == 0) prev_ = frames;
  StepResult out;

  if (!color_bg_.empty()) {
    std::vector<ColorImage> curr, prev;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      curr.push_back(std::get<ColorImage>(frames[i]));
      prev.push_back(std::get<ColorImage>(prev_[i]));
      if (!color_bg_[i].ready()) color_bg_[i].update(curr.back());
    }
    out.frame = process_rgb_frames(views_, curr, prev, color_bg_, config_.grid, config_.min_votes);
    for (std::size_t i = 0; i < curr.size(); ++i) color_bg_[i].update(curr[i]);
  } else {
    const auto& curr = std::get<DepthImage>(frames[0]);
    if (!depth_bg_[0].ready()) depth_bg_[0].update(curr);
    out.frame = process_depth_frame(views_[0], std::get<DepthImage>(prev_[0]), curr, depth_bg_[0],
                                    config_.grid);
    depth_bg_[0].update(curr);
  }

  const auto t0 = Clock::now();
  const BinaryMask& occ = out.frame.occupancy;
  cumulative_.update(occ);
  if (topview_flow_)
    out.topview_flow = topview_flow(frames_ == 0 ? occ : prev_occupancy_, occ, config_.topview_flow);
  out.saturation = saturation_query(cumulative_, config_.s_min, config_.min_cluster);
  out.analytics_ms = ms_since(t0);

  prev_ = std::move(frames);
  prev_occupancy_ = occ;
  ++frames_;
  return out;
}

ViewFrame load_frame(const io::ViewSource& view, const fs::path& path) {
  try {
    const std::string bytes = io::read_file(path);
    if (view.kind == ViewKind::rgb) return io::decode_color(bytes);
    return io::decode_depth(bytes, view.max_range);
  } catch (const std::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Outputs

std::string format_metrics(const MetricsRecord& m) {
  const StageTimings& s = m.stages;
  std::string line = "frame=" + std::to_string(m.frame);
  auto ms = [&](const char* key, double v) { line += std::string(" ") + key + "=" + fmt("%.3f", v); };
  ms("decode_ms", m.decode_ms);
  ms("foreground_ms", s.foreground_ms);
  ms("components_ms", s.components_ms);
  ms("gray_ms", s.gray_ms);
  ms("flow_ms", s.flow_ms);
  ms("edges_ms", s.edges_ms);
  ms("mean_flow_ms", s.mean_flow_ms);
  ms("angular_ms", s.angular_ms);
  ms("fill_ms", s.fill_ms);
  ms("reproject_ms", s.reproject_ms);
  ms("fuse_ms", s.fuse_ms);
  ms("analytics_ms", m.analytics_ms);
  ms("total_ms", m.total_ms);
  line += " occupied=" + std::to_string(m.occupied_cells);
  line += " fps=" + fmt("%.6f", m.fps);
  line += " clusters=" + std::to_string(m.clusters);
  return line;
}

Plane<std::uint8_t, 3> cumulative_heatmap(const CumulativeGrid& grid) {
  const GridSpec& g = grid.spec();
  Plane<std::uint8_t, 3> out(g.cols, g.rows);
  for (std::size_t i = 0; i < out.pixel_count(); ++i)
    out.data()[3 * i + 2] =
        static_cast<std::uint8_t>(std::lround(std::clamp(grid.values()[i], 0.0, 1.0) * 255.0));
  return out;
}

Plane<std::uint8_t, 3> flow_visual(const FlowField& flow) {
  Plane<std::uint8_t, 3> out(flow.width(), flow.height());
  for (std::size_t i = 0; i < out.pixel_count(); ++i) {
    const double u = flow.u[i], v = flow.v[i];
    double hue = std::atan2(v, u) * 180.0 / std::numbers::pi;
    if (hue < 0.0) hue += 360.0;
    const double sat = std::min(1.0, std::hypot(u, v) / 2.0);
    const auto rgb = hsv_to_rgb(hue >= 360.0 ? 0.0 : hue, sat);
    std::copy(rgb.begin(), rgb.end(), out.data().begin() + 3 * static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

void run(const io::RunConfig& config, std::ostream* progress) {
  apply_threads(config.threads);
  fs::create_directories(config.output);
  Session session(config, load_calibrations(config), load_backgrounds(config));
  std::ofstream log(config.output / "metrics.log", std::ios::trunc);
  if (!log) throw Error("cannot write " + (config.output / "metrics.log").string());

  const auto start = Clock::now();
  for (int t = 0; t < config.frame_count; ++t) {
    try {
      const auto t0 = Clock::now();
      auto frames = load_frames(config, t);
      const double decode_ms = ms_since(t0);
      const StepResult r = session.step(std::move(frames));

      char name[32];
      std::snprintf(name, sizeof name, "occ_%06d.pgm", t);
      io::write_file(config.output / name, io::encode_mask(r.frame.occupancy));
      std::snprintf(name, sizeof name, "cum_%06d.ppm", t);
      io::write_file(config.output / name, io::encode_ppm(cumulative_heatmap(session.cumulative())));
      std::snprintf(name, sizeof name, "flow_%06d.ppm", t);
      io::write_file(config.output / name, io::encode_ppm(flow_visual(r.topview_flow)));

      MetricsRecord m;
      m.frame = t;
      m.decode_ms = decode_ms;
      m.stages = r.frame.timings;
      m.analytics_ms = r.analytics_ms;
      m.total_ms = ms_since(t0);
      m.occupied_cells = static_cast<int>(
          std::count(r.frame.occupancy.data().begin(), r.frame.occupancy.data().end(), 1));
      m.fps = (t + 1) / std::max(1e-9, ms_since(start) / 1000.0);
      m.clusters = static_cast<int>(r.saturation.clusters.size());
      log << format_metrics(m) << '\n';
      log.flush();
      if (progress && (t + 1) % 25 == 0)
        *progress << "frame " << t + 1 << "/" << config.frame_count << "\n";
    } catch (const std::exception& e) {
      throw Error("frame " + std::to_string(t) + ": " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Scenarios

io::RunConfig scenario_config(const synth::Scenario& s) {
  io::RunConfig c;
  c.frame_count = s.frame_count;
  c.grid = s.grid();
  c.t_span = s.t_span;
  c.background = BackgroundMode::user_frame;
  for (std::size_t i = 0; i < s.cameras.size(); ++i) {
    io::ViewSource v;
    v.id = static_cast<int>(i);
    v.kind = s.cameras[i].kind;
    v.max_range = static_cast<float>(s.cameras[i].max_range);
    c.views.push_back(v);
  }
  return c;
}

std::vector<Calibration> scenario_calibrations(const synth::Scenario& s) {
  std::vector<Calibration> out;
  for (const auto& cam : s.cameras) {
    if (cam.kind == ViewKind::rgb) out.emplace_back(cam.ground_homography());
    else out.emplace_back(cam.camera);
  }
  return out;
}

namespace {
ViewFrame as_view_frame(synth::Frame f) {
  return std::visit([](auto&& img) -> ViewFrame { return std::move(img); }, std::move(f));
}
}  // namespace

std::vector<ViewFrame> scenario_backgrounds(const synth::Scenario& s) {
  std::vector<ViewFrame> out;
  for (std::size_t i = 0; i < s.cameras.size(); ++i)
    out.push_back(as_view_frame(synth::render_background(s, static_cast<int>(i))));
  return out;
}

std::vector<ViewFrame> scenario_frames(const synth::Scenario& s, int t) {
  std::vector<ViewFrame> out;
  for (std::size_t i = 0; i < s.cameras.size(); ++i)
    out.push_back(as_view_frame(synth::render_frame(s, static_cast<int>(i), t)));
  return out;
}

namespace {
std::string encode_frame(const ViewFrame& f) {
  if (const auto* c = std::get_if<ColorImage>(&f)) return io::encode_color(*c);
  return io::encode_depth(std::get<DepthImage>(f));
}
}  // namespace

void synth(const synth::Scenario& s, const fs::path& out) {
  s.validate();
  fs::create_directories(out / "truth");
  io::RunConfig cfg = scenario_config(s);
  cfg.output = out / "run";
  const auto calibs = scenario_calibrations(s);
  const auto backgrounds = scenario_backgrounds(s);

  for (std::size_t i = 0; i < s.cameras.size(); ++i) {
    const fs::path dir = out / ("cam" + std::to_string(i));
    fs::create_directories(dir);
    const char* ext = s.cameras[i].kind == ViewKind::rgb ? ".ppm" : ".pgm";
    io::write_file(dir / "calib.txt", io::format_calibration(calibs[i]));
    io::write_file(dir / (std::string("background") + ext), encode_frame(backgrounds[i]));
    auto& v = cfg.views[i];
    v.calibration = dir / "calib.txt";
    v.background = dir / (std::string("background") + ext);
    v.frames = (dir / (std::string("frame_%06d") + ext)).string();
  }
  const GridSpec grid = s.grid();
  for (int t = 0; t < s.frame_count; ++t) {
    const auto frames = scenario_frames(s, t);
    for (std::size_t i = 0; i < frames.size(); ++i)
      io::write_file(cfg.views[i].frame_path(t), encode_frame(frames[i]));
    char name[32];
    std::snprintf(name, sizeof name, "truth_%06d.pgm", t);
    io::write_file(out / "truth" / name, io::encode_mask(synth::ground_truth_footprint(s, grid, t)));
  }
  io::write_file(out / "scenario.json", synth::scenario_to_json(s));
  io::write_file(out / "config.ini", io::format_config(cfg, out));
}

// ---------------------------------------------------------------------------
// Benchmark

BenchReport bench(const io::RunConfig& config, int warmup, int measure) {
  if (measure < 1) throw Error("bench: measure must be at least 1 frame");
  if (warmup < 0) throw Error("bench: warmup must be non-negative");
  if (config.frame_count < warmup + measure)
    throw Error("bench: sequence has " + std::to_string(config.frame_count) +
                " frames, need warmup + measure = " + std::to_string(warmup + measure));
  apply_threads(config.threads);
  const auto calibs = load_calibrations(config);
  const auto backgrounds = load_backgrounds(config);

  BenchReport r;
  r.warmup = warmup;
  r.measure = measure;
  std::vector<double> noop, full;
  StageTimings stages;
  double analytics = 0.0;
  for (int rep = 0; rep < r.repeats; ++rep) {
    double elapsed = 0.0;
    for (int t = 0; t < warmup + measure; ++t) {
      const auto t0 = Clock::now();
      const auto frames = load_frames(config, t);
      if (t >= warmup) elapsed += ms_since(t0);
    }
    noop.push_back(measure / std::max(1e-9, elapsed / 1000.0));

    Session session(config, calibs, backgrounds);
    elapsed = 0.0;
    for (int t = 0; t < warmup + measure; ++t) {
      const auto t0 = Clock::now();
      const StepResult s = session.step(load_frames(config, t));
      if (t >= warmup) {
        elapsed += ms_since(t0);
        stages += s.frame.timings;
        analytics += s.analytics_ms;
      }
    }
    full.push_back(measure / std::max(1e-9, elapsed / 1000.0));
  }
  r.noop_fps = median3(noop);
  r.pipeline_fps = median3(full);
  const double n = static_cast<double>(measure) * r.repeats;
  auto scale = [n](double& v) { v /= n; };
  scale(stages.foreground_ms);
  scale(stages.components_ms);
  scale(stages.gray_ms);
  scale(stages.flow_ms);
  scale(stages.edges_ms);
  scale(stages.mean_flow_ms);
  scale(stages.angular_ms);
  scale(stages.fill_ms);
  scale(stages.reproject_ms);
  scale(stages.fuse_ms);
  r.stage_mean_ms = stages;
  r.analytics_mean_ms = analytics / n;
  r.realtime = r.pipeline_fps >= kRealtimeFps;
  return r;
}

std::string format_bench(const BenchReport& r) {
  const StageTimings& s = r.stage_mean_ms;
  std::string out = "# topgrid bench; no-op baseline = frame decode only, no pipeline work\n";
  out += "warmup=" + std::to_string(r.warmup) + "\n";
  out += "measure=" + std::to_string(r.measure) + "\n";
  out += "repeats=" + std::to_string(r.repeats) + " (median reported)\n";
  out += "noop_fps=" + fmt("%.3f", r.noop_fps) + "\n";
  out += "pipeline_fps=" + fmt("%.3f", r.pipeline_fps) + "\n";
  auto ms = [&](const char* k, double v) { out += std::string("mean_ms.") + k + "=" + fmt("%.3f", v) + "\n"; };
  ms("foreground", s.foreground_ms);
  ms("components", s.components_ms);
  ms("gray", s.gray_ms);
  ms("flow", s.flow_ms);
  ms("edges", s.edges_ms);
  ms("mean_flow", s.mean_flow_ms);
  ms("angular", s.angular_ms);
  ms("fill", s.fill_ms);
  ms("reproject", s.reproject_ms);
  ms("fuse", s.fuse_ms);
  ms("analytics", r.analytics_mean_ms);
  out += std::string("realtime=") + (r.realtime ? "true" : "false") + " (pipeline_fps >= " +
         fmt("%.0f", kRealtimeFps) + ")\n";
  return out;
}

}  // namespace topgrid::app
