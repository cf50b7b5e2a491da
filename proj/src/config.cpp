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

#include "topgrid/io/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "topgrid/io/netpbm.hpp"

namespace topgrid::io {

namespace fs = std::filesystem;

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Table {
 public:
  explicit Table(std::string_view text) {
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) fail(line_no, "malformed section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) fail(line_no, "expected key = value");
      const std::string key = std::string(trim(line.substr(0, eq)));
      if (key.empty()) fail(line_no, "empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (entries_.count(full)) fail(line_no, "duplicate key '" + full + "'");
      entries_[full] = {std::string(trim(line.substr(eq + 1))), line_no, false};
      if (section.rfind("view.", 0) == 0) sections_.insert(section);
    }
  }

  [[noreturn]] static void fail(int line, const std::string& msg) {
    throw Error("config line " + std::to_string(line) + ": " + msg);
  }

  const Entry* find(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const Entry* e = find(key);
    return e ? e->value : fallback;
  }

  std::string required(const std::string& key) {
    const Entry* e = find(key);
    if (!e) throw Error("config: missing key '" + key + "'");
    return e->value;
  }

  template <typename T>
  void number(const std::string& key, T& out, T lo, T hi) {
    const Entry* e = find(key);
    if (!e) return;
    T v{};
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    const auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) fail(e->line, "'" + key + "' is not a number");
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(v)) fail(e->line, "'" + key + "' must be finite");
    }
    if (v < lo || v > hi)
      fail(e->line, "'" + key + "' out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out = v;
  }

  const std::set<std::string>& view_sections() const { return sections_; }

  void reject_unused() const {
    for (const auto& [k, e] : entries_)
      if (!e.used) fail(e.line, "unknown key '" + k + "'");
  }

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::string> sections_;
};

constexpr double kBig = 1e9;
constexpr int kBigInt = 1 << 30;

void detection(Table& t, const std::string& s, DetectionParams& p, bool depth) {
  if (depth) {
    float v = p.tau_depth;
    t.number(s + ".tau", v, 0.0f, 1e6f);
    p.tau_depth = v;
  } else {
    t.number(s + ".tau", p.tau, 0.0f, std::numbers::sqrt3_v<float>);
  }
  t.number(s + ".min_area", p.min_area, 1, kBigInt);
  t.number(s + ".canny_low", p.canny.low, 0.0, kBig);
  t.number(s + ".canny_high", p.canny.high, 0.0, kBig);
  t.number(s + ".canny_sigma", p.canny.sigma, 1e-6, 100.0);
  if (p.canny.low > p.canny.high) throw Error("config: " + s + ".canny_low exceeds canny_high");
  double deg = p.theta_max * 180.0 / std::numbers::pi;
  t.number(s + ".theta_max_deg", deg, 0.0, 90.0);
  p.theta_max = deg * std::numbers::pi / 180.0;
  t.number(s + ".flow_alpha", p.flow.alpha, 1e-9, kBig);
  t.number(s + ".flow_iterations", p.flow.iterations, 1, 100000);
  t.number(s + ".flow_levels", p.flow.pyramid_levels, 1, 16);
  t.number(s + ".flow_sigma", p.flow.presmooth_sigma, 0.0, 100.0);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  if (base.empty()) return p.string();
  const fs::path rel = p.lexically_relative(base);
  return rel.empty() ? p.string() : rel.string();
}

// Shortest text that parses back to the same value.
template <typename T>
std::string num(T v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void format_detection(std::string& out, const std::string& name, const DetectionParams& p,
                      bool depth) {
  out += "\n[" + name + "]\n";
  out += "tau = " + num(depth ? p.tau_depth : p.tau) + "\n";
  out += "min_area = " + std::to_string(p.min_area) + "\n";
  out += "canny_low = " + num(p.canny.low) + "\n";
  out += "canny_high = " + num(p.canny.high) + "\n";
  out += "canny_sigma = " + num(p.canny.sigma) + "\n";
  out += "theta_max_deg = " + num(p.theta_max * 180.0 / std::numbers::pi) + "\n";
  out += "flow_alpha = " + num(p.flow.alpha) + "\n";
  out += "flow_iterations = " + std::to_string(p.flow.iterations) + "\n";
  out += "flow_levels = " + std::to_string(p.flow.pyramid_levels) + "\n";
  out += "flow_sigma = " + num(p.flow.presmooth_sigma) + "\n";
}

}  // namespace

std::string expand_pattern(std::string_view pattern, int index) {
  const auto pct = pattern.find('%');
  if (pct == std::string_view::npos) throw Error("frame pattern has no %d field: " + std::string(pattern));
  std::size_t i = pct + 1;
  int width = 0;
  bool zero = false;
  if (i < pattern.size() && pattern[i] == '0') {
    zero = true;
    ++i;
  }
  while (i < pattern.size() && pattern[i] >= '0' && pattern[i] <= '9') width = width * 10 + (pattern[i++] - '0');
  if (i >= pattern.size() || pattern[i] != 'd' || width > 12)
    throw Error("frame pattern needs a %d or %0Nd field: " + std::string(pattern));
  const std::string_view tail = pattern.substr(i + 1);
  if (tail.find('%') != std::string_view::npos)
    throw Error("frame pattern has more than one % field: " + std::string(pattern));
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < width)
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), zero ? '0' : ' ');
  return std::string(pattern.substr(0, pct)) + digits + std::string(tail);
}

fs::path ViewSource::frame_path(int index) const { return expand_pattern(frames, index); }

RunConfig parse_config(std::string_view text, const fs::path& base_dir) {
  Table t(text);
  RunConfig c;
  t.number("frames", c.frame_count, 1, kBigInt);
  if (!t.find("frames")) throw Error("config: missing key 'frames'");
  c.output = resolve(base_dir, t.text("output", "out"));
  t.number("threads", c.threads, 0, 1024);
  t.number("min_votes", c.min_votes, 0, 255);

  t.number("grid.origin_x", c.grid.origin_x, -kBig, kBig);
  t.number("grid.origin_y", c.grid.origin_y, -kBig, kBig);
  t.number("grid.cell_size", c.grid.cell_size, 1e-6, kBig);
  t.number("grid.cols", c.grid.cols, 1, 1 << 15);
  t.number("grid.rows", c.grid.rows, 1, 1 << 15);

  const std::string bg = t.text("background.mode", "frame");
  if (bg == "frame") c.background = BackgroundMode::user_frame;
  else if (bg == "mean") c.background = BackgroundMode::running_mean;
  else throw Error("config: background.mode must be 'frame' or 'mean'");
  t.number("background.window", c.background_window, 1, kBigInt);

  detection(t, "rgb", c.rgb, false);
  detection(t, "depth", c.depth, true);

  const std::string cm = t.text("cumulative.mode", "sliding");
  if (cm == "sliding") c.cumulative = CumulativeMode::sliding;
  else if (cm == "full") c.cumulative = CumulativeMode::full_history;
  else throw Error("config: cumulative.mode must be 'sliding' or 'full'");
  t.number("cumulative.t_span", c.t_span, 1, kBigInt);
  t.number("cumulative.s_min", c.s_min, 1e-9, 1.0);
  t.number("cumulative.min_cluster", c.min_cluster, 1, kBigInt);

  t.number("topview_flow.alpha", c.topview_flow.alpha, 1e-9, kBig);
  t.number("topview_flow.iterations", c.topview_flow.iterations, 1, 100000);
  t.number("topview_flow.levels", c.topview_flow.pyramid_levels, 1, 16);
  t.number("topview_flow.sigma", c.topview_flow.presmooth_sigma, 0.0, 100.0);

  for (const auto& s : t.view_sections()) {
    ViewSource v;
    const std::string id = s.substr(5);
    const auto [p, ec] = std::from_chars(id.data(), id.data() + id.size(), v.id);
    if (ec != std::errc() || p != id.data() + id.size() || v.id < 0)
      throw Error("config: bad view section [" + s + "]");
    const std::string kind = t.required(s + ".kind");
    if (kind == "rgb") v.kind = ViewKind::rgb;
    else if (kind == "depth") v.kind = ViewKind::depth;
    else throw Error("config: " + s + ".kind must be rgb or depth");
    v.calibration = resolve(base_dir, t.required(s + ".calibration"));
    v.frames = resolve(base_dir, t.required(s + ".frames")).string();
    expand_pattern(v.frames, 0);
    if (const Entry* e = t.find(s + ".background")) v.background = resolve(base_dir, e->value);
    t.number(s + ".max_range", v.max_range, 1e-3f, 65.0f);
    if (c.background == BackgroundMode::user_frame && v.background.empty())
      throw Error("config: " + s + " needs a background image in background.mode = frame");
    c.views.push_back(std::move(v));
  }
  t.reject_unused();

  if (c.views.empty()) throw Error("config: no [view.N] sections");
  std::sort(c.views.begin(), c.views.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  const ViewKind kind = c.views.front().kind;
  for (const auto& v : c.views)
    if (v.kind != kind) throw Error("config: rgb and depth views cannot be mixed in one run");
  if (kind == ViewKind::depth && c.views.size() != 1)
    throw Error("config: depth runs take exactly one view");
  if (c.min_votes > static_cast<int>(c.views.size()))
    throw Error("config: min_votes exceeds the number of views");
  return c;
}

void check_inputs(const RunConfig& c) {
  auto need = [](const fs::path& p) {
    if (!fs::is_regular_file(p)) throw Error("missing input file: " + p.string());
  };
  for (const auto& v : c.views) {
    need(v.calibration);
    if (c.background == BackgroundMode::user_frame) need(v.background);
    for (int i = 0; i < c.frame_count; ++i) need(v.frame_path(i));
  }
}

RunConfig load_config(const fs::path& path) {
  RunConfig c = parse_config(read_file(path), path.parent_path());
  check_inputs(c);
  return c;
}

std::string format_config(const RunConfig& c, const fs::path& base) {
  std::string out = "# topgrid run configuration\n";
  out += "frames = " + std::to_string(c.frame_count) + "\n";
  out += "output = " + relative_to(c.output, base) + "\n";
  out += "threads = " + std::to_string(c.threads) + "\n";
  out += "min_votes = " + std::to_string(c.min_votes) + "\n";
  out += "\n[grid]\n";
  out += "origin_x = " + num(c.grid.origin_x) + "\n";
  out += "origin_y = " + num(c.grid.origin_y) + "\n";
  out += "cell_size = " + num(c.grid.cell_size) + "\n";
  out += "cols = " + std::to_string(c.grid.cols) + "\n";
  out += "rows = " + std::to_string(c.grid.rows) + "\n";
  out += "\n[background]\n";
  out += std::string("mode = ") + (c.background == BackgroundMode::user_frame ? "frame" : "mean") + "\n";
  out += "window = " + std::to_string(c.background_window) + "\n";
  format_detection(out, "rgb", c.rgb, false);
  format_detection(out, "depth", c.depth, true);
  out += "\n[cumulative]\n";
  out += std::string("mode = ") + (c.cumulative == CumulativeMode::sliding ? "sliding" : "full") + "\n";
  out += "t_span = " + std::to_string(c.t_span) + "\n";
  out += "s_min = " + num(c.s_min) + "\n";
  out += "min_cluster = " + std::to_string(c.min_cluster) + "\n";
  out += "\n[topview_flow]\n";
  out += "alpha = " + num(c.topview_flow.alpha) + "\n";
  out += "iterations = " + std::to_string(c.topview_flow.iterations) + "\n";
  out += "levels = " + std::to_string(c.topview_flow.pyramid_levels) + "\n";
  out += "sigma = " + num(c.topview_flow.presmooth_sigma) + "\n";
  for (const auto& v : c.views) {
    out += "\n[view." + std::to_string(v.id) + "]\n";
    out += std::string("kind = ") + (v.kind == ViewKind::rgb ? "rgb" : "depth") + "\n";
    out += "calibration = " + relative_to(v.calibration, base) + "\n";
    out += "frames = " + relative_to(v.frames, base) + "\n";
    if (!v.background.empty()) out += "background = " + relative_to(v.background, base) + "\n";
    if (v.kind == ViewKind::depth) out += "max_range = " + num(v.max_range) + "\n";
  }
  return out;
}

}  // namespace topgrid::io
