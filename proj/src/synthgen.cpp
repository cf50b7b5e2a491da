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

#include "topgrid/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

namespace topgrid::synth {

// ---------------------------------------------------------------------------
// Agents and scenarios

bool Agent::present(int t) const {
  return !waypoints.empty() && t >= waypoints.front().frame && t <= waypoints.back().frame;
}

Vec2 Agent::position(int t) const {
  if (waypoints.empty()) throw Error("agent without waypoints");
  if (t <= waypoints.front().frame) return {waypoints.front().a, waypoints.front().b};
  for (std::size_t k = 1; k < waypoints.size(); ++k) {
    const Waypoint& p = waypoints[k - 1];
    const Waypoint& q = waypoints[k];
    if (t <= q.frame) {
      const double s = static_cast<double>(t - p.frame) / (q.frame - p.frame);
      return {p.a + s * (q.a - p.a), p.b + s * (q.b - p.b)};
    }
  }
  return {waypoints.back().a, waypoints.back().b};
}

void Agent::validate() const {
  if (!(radius > 0.0) || !(height > 0.0)) throw Error("agent radius and height must be positive");
  if (waypoints.empty()) throw Error("agent needs at least one waypoint");
  for (std::size_t k = 1; k < waypoints.size(); ++k)
    if (waypoints[k].frame <= waypoints[k - 1].frame)
      throw Error("agent waypoint frames must be strictly increasing");
}

GridSpec Scenario::grid() const {
  GridSpec g;
  g.origin_x = ground_min.x;
  g.origin_y = ground_min.y;
  g.cell_size = cell_size;
  g.cols = static_cast<int>(std::lround((ground_max.x - ground_min.x) / cell_size));
  g.rows = static_cast<int>(std::lround((ground_max.y - ground_min.y) / cell_size));
  return g;
}

Vec3 Scenario::to_world(double a, double b, double h) const {
  return up == UpAxis::z_up ? Vec3{a, b, h} : Vec3{a, h, b};
}

void Scenario::validate() const {
  if (frame_count < 2) throw Error("scenario needs at least two frames");
  if (cameras.empty()) throw Error("scenario needs at least one camera");
  grid().validate();
  for (const auto& ag : agents) {
    ag.validate();
    for (const auto& w : ag.waypoints) {
      if (w.a - ag.radius < ground_min.x || w.a + ag.radius > ground_max.x ||
          w.b - ag.radius < ground_min.y || w.b + ag.radius > ground_max.y)
        throw Error("scenario " + name + ": agent trajectory leaves the world extent");
    }
  }
}

PinholeCamera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double focal,
                      int width, int height) {
  auto sub = [](Vec3 a, Vec3 b) { return Vec3{a.x - b.x, a.y - b.y, a.z - b.z}; };
  auto cross = [](Vec3 a, Vec3 b) {
    return Vec3{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  };
  auto unit = [](Vec3 a) {
    const double n = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
    return Vec3{a.x / n, a.y / n, a.z / n};
  };
  const Vec3 f = unit(sub(target, eye));
  const Vec3 r = unit(cross(f, up));
  const Vec3 d = cross(f, r);
  const Mat3 rot{r.x, r.y, r.z, d.x, d.y, d.z, f.x, f.y, f.z};
  const Vec3 rc = multiply(rot, eye);
  return PinholeCamera(focal, focal, (width - 1) / 2.0, (height - 1) / 2.0, rot,
                       {-rc.x, -rc.y, -rc.z});
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double hash01(std::uint64_t seed, std::int64_t i, std::int64_t j, std::int64_t k = 0) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ static_cast<std::uint64_t>(i));
  h = mix(h ^ static_cast<std::uint64_t>(j));
  h = mix(h ^ static_cast<std::uint64_t>(k));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(std::uint64_t seed, double u, double v) {
  const double fu = std::floor(u), fv = std::floor(v);
  const auto iu = static_cast<std::int64_t>(fu), iv = static_cast<std::int64_t>(fv);
  double su = u - fu, sv = v - fv;
  su = su * su * (3 - 2 * su);
  sv = sv * sv * (3 - 2 * sv);
  const double a = hash01(seed, iu, iv), b = hash01(seed, iu + 1, iv);
  const double c = hash01(seed, iu, iv + 1), d = hash01(seed, iu + 1, iv + 1);
  return (a + su * (b - a)) + sv * ((c + su * (d - c)) - (a + su * (b - a)));
}

struct Hit {
  double s = INFINITY;  // camera depth along the ray
  int agent = -1;       // -1 ground, -2 nothing
  bool cap = false;
  double a = 0.0, b = 0.0, h = 0.0;  // hit point in ground coordinates + height
};

class Raycaster {
 public:
  Raycaster(const Scenario& s, const CameraRig& rig, int t, bool with_agents)
      : s_(s), rig_(rig), center_(rig.camera.center()) {
    if (with_agents) {
      for (std::size_t i = 0; i < s.agents.size(); ++i)
        if (s.agents[i].present(t)) live_.push_back({static_cast<int>(i), s.agents[i].position(t)});
    }
  }

  Hit cast(double x, double y) const {
    const PinholeCamera& cam = rig_.camera;
    const Vec3 dc{(x - cam.cx()) / cam.fx(), (y - cam.cy()) / cam.fy(), 1.0};
    const Vec3 d = multiply(transpose(cam.rotation()), dc);
    const double oa = ga(center_), ob = gb(center_), oh = up(center_);
    const double da = ga(d), db = gb(d), dh = up(d);

    Hit best;
    best.agent = -2;
    if (dh < 0.0) {
      best.s = -oh / dh;
      best.agent = -1;
      best.a = oa + best.s * da;
      best.b = ob + best.s * db;
    }
    for (const auto& [index, pos] : live_) {
      const Agent& ag = s_.agents[index];
      const double pa = oa - pos.x, pb = ob - pos.y;
      const double qa = da * da + db * db;
      if (qa > 1e-18) {
        const double qb = 2.0 * (pa * da + pb * db);
        const double qc = pa * pa + pb * pb - ag.radius * ag.radius;
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
          const double s = (-qb - std::sqrt(disc)) / (2.0 * qa);
          const double h = oh + s * dh;
          if (s > 0.0 && s < best.s && h >= 0.0 && h <= ag.height)
            best = {s, index, false, oa + s * da, ob + s * db, h};
        }
      }
      if (std::abs(dh) > 1e-18) {
        const double s = (ag.height - oh) / dh;
        const double a = oa + s * da, b = ob + s * db;
        if (s > 0.0 && s < best.s &&
            (a - pos.x) * (a - pos.x) + (b - pos.y) * (b - pos.y) <= ag.radius * ag.radius)
          best = {s, index, true, a, b, ag.height};
      }
    }
    return best;
  }

  Vec2 agent_position(int index) const {
    for (const auto& [i, p] : live_)
      if (i == index) return p;
    return {};
  }

 private:
  double ga(const Vec3& p) const { return p.x; }
  double gb(const Vec3& p) const { return s_.up == UpAxis::z_up ? p.y : p.z; }
  double up(const Vec3& p) const { return s_.up == UpAxis::z_up ? p.z : p.y; }

  const Scenario& s_;
  const CameraRig& rig_;
  Vec3 center_;
  std::vector<std::pair<int, Vec2>> live_;
};

std::array<double, 3> shade(const Scenario& s, const Raycaster& rc, const Hit& hit) {
  if (hit.agent == -2) return {0.0, 0.0, 0.0};
  if (hit.agent == -1) {
    const double n = 0.7 * value_noise(s.seed, hit.a / 0.6, hit.b / 0.6) +
                     0.3 * value_noise(s.seed + 1, hit.a / 0.15, hit.b / 0.15);
    const double g = 0.66 + 0.12 * n;
    return {g, g, 0.95 * g};
  }
  const Agent& ag = s.agents[hit.agent];
  double f;
  if (hit.cap) {
    f = 0.4;
  } else {
    // clothing: value noise over (arc length, height) with an 8 cm feature
    // size, quantised to three levels so its contours run in every direction
    const Vec2 p = rc.agent_position(hit.agent);
    const double arc = (std::atan2(hit.b - p.y, hit.a - p.x) + std::numbers::pi) * ag.radius;
    const double n = value_noise(s.seed + 7 + 131 * static_cast<std::uint64_t>(hit.agent),
                                 arc / 0.08, hit.h / 0.08);
    f = n < 0.4 ? 0.25 : n < 0.6 ? 0.6 : 1.0;
  }
  return {std::min(1.0, ag.albedo[0] * f), std::min(1.0, ag.albedo[1] * f),
          std::min(1.0, ag.albedo[2] * f)};
}

std::mt19937_64 noise_rng(const Scenario& s, int cam, int t) {
  return std::mt19937_64(mix(mix(s.seed ^ 0x5eedULL) ^ (static_cast<std::uint64_t>(cam) << 32) ^
                             static_cast<std::uint64_t>(t)));
}

Frame render(const Scenario& s, int cam, int t, bool agents, bool noise) {
  if (cam < 0 || cam >= static_cast<int>(s.cameras.size())) throw Error("camera index out of range");
  if (t < 0 || t >= s.frame_count) throw Error("frame index out of range");
  const CameraRig& rig = s.cameras[cam];
  const Raycaster rc(s, rig, t, agents);
  auto rng = noise_rng(s, cam, t);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const bool add_noise = noise && s.noise_sigma > 0.0;

  if (rig.kind == ViewKind::rgb) {
    // Surface ids at the pixel corners; pixels whose corners disagree with
    // their centre straddle a silhouette and are supersampled 4x4.
    const int w = rig.width, h = rig.height;
    auto id = [](const Hit& hit) { return hit.agent < 0 ? hit.agent : 2 * hit.agent + hit.cap; };
    std::vector<int> corner(static_cast<std::size_t>(w + 1) * (h + 1));
    for (int y = 0; y <= h; ++y)
      for (int x = 0; x <= w; ++x)
        corner[static_cast<std::size_t>(y) * (w + 1) + x] = id(rc.cast(x - 0.5, y - 0.5));

    ColorImage img(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const Hit centre = rc.cast(x, y);
        const int c0 = id(centre);
        const std::size_t k0 = static_cast<std::size_t>(y) * (w + 1) + x;
        std::array<double, 3> c = shade(s, rc, centre);
        if (corner[k0] != c0 || corner[k0 + 1] != c0 || corner[k0 + w + 1] != c0 ||
            corner[k0 + w + 2] != c0) {
          c = {0.0, 0.0, 0.0};
          for (int j = 0; j < 4; ++j) {
            for (int i = 0; i < 4; ++i) {
              const auto sub = shade(s, rc, rc.cast(x - 0.375 + 0.25 * i, y - 0.375 + 0.25 * j));
              for (int k = 0; k < 3; ++k) c[k] += sub[k] / 16.0;
            }
          }
        }
        for (int k = 0; k < 3; ++k) {
          double v = c[k];
          if (add_noise) v += s.noise_sigma * gauss(rng);
          img.at(x, y, k) = static_cast<float>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0);
        }
      }
    }
    return img;
  }

  DepthImage d;
  d.max_range = static_cast<float>(rig.max_range);
  d.range = Plane<float>(rig.width, rig.height);
  for (int y = 0; y < rig.height; ++y) {
    for (int x = 0; x < rig.width; ++x) {
      const Hit hit = rc.cast(x, y);
      if (hit.agent == -2) continue;
      double z = hit.s;
      if (add_noise) z += s.noise_sigma * gauss(rng);
      const double mm = std::round(z * 1000.0);
      if (mm <= 0.0 || mm > rig.max_range * 1000.0) continue;
      d.range.at(x, y) = static_cast<float>(mm / 1000.0);
    }
  }
  return d;
}

}  // namespace

Frame render_frame(const Scenario& s, int cam, int t) { return render(s, cam, t, true, true); }

Frame render_background(const Scenario& s, int cam) { return render(s, cam, 0, false, false); }

BinaryMask ground_truth_footprint(const Scenario& s, const GridSpec& spec, int t) {
  spec.validate();
  BinaryMask out = spec.empty_mask();
  for (const auto& ag : s.agents) {
    if (!ag.present(t)) continue;
    const Vec2 p = ag.position(t);
    const double r2 = ag.radius * ag.radius;
    const int c0 = std::max(0, static_cast<int>(std::floor((p.x - ag.radius - spec.origin_x) / spec.cell_size)));
    const int c1 = std::min(spec.cols - 1, static_cast<int>(std::floor((p.x + ag.radius - spec.origin_x) / spec.cell_size)));
    const int r0 = std::max(0, static_cast<int>(std::floor((p.y - ag.radius - spec.origin_y) / spec.cell_size)));
    const int r1 = std::min(spec.rows - 1, static_cast<int>(std::floor((p.y + ag.radius - spec.origin_y) / spec.cell_size)));
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const Vec2 q = spec.cell_center(c, r);
        if ((q.x - p.x) * (q.x - p.x) + (q.y - p.y) * (q.y - p.y) <= r2) out.at(c, r) = 1;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Standard scenarios

namespace {

constexpr int kRgbWidth = 480;
constexpr int kRgbHeight = 360;
constexpr double kRgbFocal = 750.0;
constexpr double kRingRadius = 7.0;
constexpr double kRingHeight = 10.0;
constexpr Vec2 kCentre{10.0, 5.0};

// Saturated clothing with luminance near 0.38; the texture scales it by
// 0.25 .. 1.0, which keeps every silhouette darker than the floor (>= 0.66)
// and every texture step above the default Canny thresholds.
const std::array<std::array<double, 3>, 8> kAlbedos{{
    {0.85, 0.20, 0.15},
    {0.20, 0.35, 0.95},
    {0.50, 0.42, 0.05},
    {0.15, 0.52, 0.15},
    {0.75, 0.28, 0.05},
    {0.60, 0.20, 0.75},
    {0.10, 0.45, 0.55},
    {0.38, 0.38, 0.38},
}};

// Three rgb cameras on a ring around the scene centre, 120 degrees apart.
std::vector<CameraRig> ring_cameras(double first_angle_deg) {
  std::vector<CameraRig> rigs;
  for (int k = 0; k < 3; ++k) {
    const double phi = (first_angle_deg + 120.0 * k) * std::numbers::pi / 180.0;
    const Vec3 eye{kCentre.x + kRingRadius * std::cos(phi), kCentre.y + kRingRadius * std::sin(phi),
                   kRingHeight};
    CameraRig rig;
    rig.kind = ViewKind::rgb;
    rig.width = kRgbWidth;
    rig.height = kRgbHeight;
    rig.camera = look_at(eye, {kCentre.x, kCentre.y, 0.0}, {0, 0, 1}, kRgbFocal, rig.width,
                         rig.height);
    rigs.push_back(rig);
  }
  return rigs;
}

Agent walker(std::array<double, 3> albedo, std::vector<Waypoint> path, double radius = 0.25,
             double height = 1.75) {
  Agent a;
  a.radius = radius;
  a.height = height;
  a.albedo = albedo;
  a.waypoints = std::move(path);
  return a;
}

Scenario crossing() {
  Scenario s;
  s.name = "crossing";
  s.seed = 11;
  s.frame_count = 100;
  s.cameras = ring_cameras(-90.0);
  s.agents.push_back(walker(kAlbedos[0], {{6.0, 3.0, 0}, {14.0, 7.0, 99}}));
  s.agents.push_back(walker(kAlbedos[1], {{6.0, 7.0, 0}, {14.0, 3.0, 99}}));
  return s;
}

Scenario loiter() {
  Scenario s;
  s.name = "loiter";
  s.seed = 23;
  s.frame_count = 200;
  s.cameras = ring_cameras(-90.0);
  s.agents.push_back(walker(kAlbedos[0], {{8.0, 5.0, 0}, {8.0, 5.0, 199}}));
  s.agents.push_back(walker(kAlbedos[1], {{3.0, 8.2, 0}, {17.0, 8.2, 199}}));
  return s;
}

Scenario crowd() {
  Scenario s;
  s.name = "crowd";
  s.seed = 37;
  s.frame_count = 90;
  s.cameras = ring_cameras(-82.5);  // no camera looks straight down an approach path
  for (int k = 0; k < 8; ++k) {
    const double phi = (22.5 + 45.0 * k) * std::numbers::pi / 180.0;
    const double c = std::cos(phi), sn = std::sin(phi);
    s.agents.push_back(walker(kAlbedos[k], {{kCentre.x + 3.0 * c, kCentre.y + 3.0 * sn, 0},
                                            {kCentre.x + 1.9 * c, kCentre.y + 1.9 * sn, 59},
                                            {kCentre.x + 1.9 * c, kCentre.y + 1.9 * sn, 89}}));
  }
  return s;
}

Scenario dropbag() {
  Scenario s;
  s.name = "dropbag";
  s.seed = 41;
  s.frame_count = 240;
  s.cameras = ring_cameras(-90.0);
  s.agents.push_back(walker(kAlbedos[0], {{3.0, 2.0, 0}, {9.0, 5.0, 60}, {9.0, 5.0, 110},
                                          {17.0, 5.0, 180}}));
  // the bag: a small static cylinder that appears when it is put down
  s.agents.push_back(walker({0.45, 0.30, 0.15}, {{8.3, 5.0, 60}, {8.3, 5.0, 239}}, 0.2, 0.45));
  return s;
}

Scenario depth_walk() {
  Scenario s;
  s.name = "depth-walk";
  s.up = UpAxis::y_up;
  s.seed = 53;
  s.frame_count = 120;
  s.ground_min = {-3.0, 0.0};
  s.ground_max = {3.0, 6.0};
  // the sensor sees only the near half of a body, whose cells sit about
  // 2r/pi in front of the axis; 10 cm cells keep that bias under two cells
  s.cell_size = 0.1;
  CameraRig rig;
  rig.kind = ViewKind::depth;
  rig.width = 176;
  rig.height = 144;
  rig.max_range = 5.0;
  rig.camera = look_at({0.0, 2.4, 0.0}, {0.0, 0.0, 3.5}, {0, 1, 0}, 220.0, rig.width, rig.height);
  s.cameras.push_back(rig);
  // out and back along a ray from the sensor: an untextured body moving
  // sideways keeps almost no edges parallel to its motion
  s.agents.push_back(walker(kAlbedos[0], {{-0.5, 2.5, 0}, {-0.8, 4.0, 55}, {-0.8, 4.0, 64},
                                          {-0.5, 2.5, 119}}));
  return s;
}

}  // namespace

std::vector<Scenario> standard_scenarios() {
  return {crossing(), loiter(), crowd(), depth_walk(), dropbag()};
}

std::optional<Scenario> find_scenario(const std::string& name) {
  for (auto& s : standard_scenarios())
    if (s.name == name) return s;
  return std::nullopt;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& s : standard_scenarios()) names.push_back(s.name);
  return names;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json camera_json(const CameraRig& r) {
  const auto& c = r.camera;
  return {{"kind", r.kind == ViewKind::rgb ? "rgb" : "depth"},
          {"width", r.width},
          {"height", r.height},
          {"max_range", r.max_range},
          {"fx", c.fx()},
          {"fy", c.fy()},
          {"cx", c.cx()},
          {"cy", c.cy()},
          {"rotation", c.rotation()},
          {"translation", {c.translation().x, c.translation().y, c.translation().z}}};
}

CameraRig camera_from(const json& j) {
  CameraRig r;
  const std::string kind = j.at("kind");
  if (kind != "rgb" && kind != "depth") throw Error("camera kind must be rgb or depth");
  r.kind = kind == "rgb" ? ViewKind::rgb : ViewKind::depth;
  r.width = j.at("width");
  r.height = j.at("height");
  r.max_range = j.value("max_range", 5.0);
  const auto t = j.at("translation").get<std::array<double, 3>>();
  r.camera = PinholeCamera(j.at("fx"), j.at("fy"), j.at("cx"), j.at("cy"),
                           j.at("rotation").get<Mat3>(), {t[0], t[1], t[2]}, 1e-6);
  return r;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["up"] = s.up == UpAxis::z_up ? "z" : "y";
  j["ground_min"] = {s.ground_min.x, s.ground_min.y};
  j["ground_max"] = {s.ground_max.x, s.ground_max.y};
  j["cell_size"] = s.cell_size;
  j["frame_count"] = s.frame_count;
  j["seed"] = s.seed;
  j["noise_sigma"] = s.noise_sigma;
  j["t_span"] = s.t_span;
  j["cameras"] = json::array();
  for (const auto& c : s.cameras) j["cameras"].push_back(camera_json(c));
  j["agents"] = json::array();
  for (const auto& a : s.agents) {
    json wp = json::array();
    for (const auto& w : a.waypoints) wp.push_back({w.a, w.b, w.frame});
    j["agents"].push_back(
        {{"radius", a.radius}, {"height", a.height}, {"albedo", a.albedo}, {"waypoints", wp}});
  }
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  Scenario s;
  try {
    const json j = json::parse(text);
    s.name = j.value("name", "custom");
    const std::string up = j.value("up", "z");
    if (up != "z" && up != "y") throw Error("up must be \"z\" or \"y\"");
    s.up = up == "z" ? UpAxis::z_up : UpAxis::y_up;
    const auto gmin = j.at("ground_min").get<std::array<double, 2>>();
    const auto gmax = j.at("ground_max").get<std::array<double, 2>>();
    s.ground_min = {gmin[0], gmin[1]};
    s.ground_max = {gmax[0], gmax[1]};
    s.cell_size = j.value("cell_size", 0.05);
    s.frame_count = j.at("frame_count");
    s.seed = j.value("seed", std::uint64_t{1});
    s.noise_sigma = j.value("noise_sigma", 0.01);
    s.t_span = j.value("t_span", 100);
    for (const auto& c : j.at("cameras")) s.cameras.push_back(camera_from(c));
    for (const auto& a : j.at("agents")) {
      Agent ag;
      ag.radius = a.at("radius");
      ag.height = a.at("height");
      ag.albedo = a.at("albedo").get<std::array<double, 3>>();
      for (const auto& w : a.at("waypoints"))
        ag.waypoints.push_back({w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<int>()});
      s.agents.push_back(std::move(ag));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("scenario file: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace topgrid::synth
