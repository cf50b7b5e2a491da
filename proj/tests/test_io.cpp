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

#include <filesystem>
#include <random>
#include <utility>

#include "doctest.h"
#include "oracles.hpp"
#include "topgrid/io/calibration.hpp"
#include "topgrid/io/config.hpp"
#include "topgrid/io/netpbm.hpp"

using namespace topgrid;
using namespace topgrid::io;
namespace fs = std::filesystem;

namespace {

template <typename T, int C>
Plane<T, C> random_plane(int w, int h, std::uint64_t seed, T hi) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, hi);
  Plane<T, C> p(w, h);
  for (auto& v : p.data()) v = static_cast<T>(u(rng));
  return p;
}

ParseError::Kind parse_kind(const std::string& bytes) {
  try {
    decode_pgm(bytes);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("decode_pgm accepted " << bytes.substr(0, 16));
  return ParseError::Kind::bad_value;
}

const char* kMinimalConfig = R"(frames = 3
output = out
[view.0]
kind = rgb
calibration = cam0/calib.txt
frames = cam0/f_%03d.ppm
background = cam0/bg.ppm
)";

}  // namespace

TEST_SUITE("io") {

TEST_CASE("netpbm round-trips are bit-identical") {
  const auto g8 = random_plane<std::uint8_t, 1>(13, 7, 1, 255);
  const auto g16 = random_plane<std::uint16_t, 1>(13, 7, 2, 65535);
  const auto rgb = random_plane<std::uint8_t, 3>(13, 7, 3, 255);
  const auto p8 = decode_pgm(encode_pgm(g8));
  CHECK(p8.maxval == 255);
  for (std::size_t i = 0; i < g8.pixel_count(); ++i) CHECK(p8.pixels[i] == g8[i]);
  const auto p16 = decode_pgm(encode_pgm16(g16));
  CHECK(p16.maxval == 65535);
  CHECK(p16.pixels == g16);
  CHECK(decode_ppm(encode_ppm(rgb)) == rgb);

  const auto c = dequantize(rgb);
  CHECK(decode_color(encode_color(c)) == c);
  BinaryMask m(5, 4);
  m.at(2, 3) = 1;
  CHECK(decode_mask(encode_mask(m)) == m);
}

TEST_CASE("16-bit samples are big-endian") {
  Plane<std::uint16_t> p(1, 1, 0x1234);
  const auto bytes = encode_pgm16(p);
  CHECK(bytes == std::string("P5 1 1 65535\n\x12\x34", 15));
}

TEST_CASE("depth is stored in millimetres") {
  DepthImage d{Plane<float>(2, 1, 3.0f), 5.0f};
  d.range.at(1, 0) = 0.0f;
  const auto bytes = encode_depth(d);
  const auto raw = decode_pgm(bytes);
  CHECK(raw.pixels.at(0, 0) == 3000);
  CHECK(raw.pixels.at(1, 0) == 0);
  const auto back = decode_depth(bytes, 5.0f);
  CHECK(back.range.at(0, 0) == doctest::Approx(3.0));
  CHECK_FALSE(back.valid(1, 0));
  CHECK_THROWS(encode_depth(DepthImage{Plane<float>(1, 1, 70.0f), 80.0f}));
}

TEST_CASE("payload length arithmetic") {
  const std::string header = "P5 4 2 255\n";
  const auto img = decode_pgm(header + std::string(8, '\x07'));
  CHECK(img.pixels.width() == 4);
  CHECK(img.pixels.height() == 2);
  CHECK(parse_kind(header + std::string(7, '\x07')) == ParseError::Kind::truncated);
  CHECK(parse_kind(header + std::string(9, '\x07')) == ParseError::Kind::bad_value);
}

TEST_CASE("malformed headers are rejected") {
  const std::string body(8, '\x01');
  CHECK(parse_kind("P2 4 2 255\n" + body) == ParseError::Kind::bad_magic);
  CHECK(parse_kind("P5  4 2 255\n" + body) != ParseError::Kind::truncated);
  CHECK(parse_kind("P5 04 2 255\n" + body) == ParseError::Kind::bad_header);
  CHECK(parse_kind("P5 4 2 254\n" + body) == ParseError::Kind::bad_maxval);
  CHECK(parse_kind("P5 4 2 255 \n" + body) == ParseError::Kind::bad_header);
  CHECK(parse_kind("P5 4 2\n255\n" + body) == ParseError::Kind::bad_header);
  CHECK(parse_kind("P5 4 2 255") == ParseError::Kind::truncated);
  CHECK(parse_kind("") == ParseError::Kind::truncated);
  CHECK_THROWS_AS(decode_ppm("P6 1 1 65535\n" + std::string(6, '\0')), ParseError);
}

TEST_CASE("every single-byte header mutation is rejected") {
  // each header paired with its exact payload size; any edit changes the
  // implied size or breaks the grammar
  const std::pair<std::string, std::size_t> files[] = {
      {"P5 4 2 255\n", 8}, {"P5 12 3 255\n", 36}, {"P5 3 2 65535\n", 12}};
  int mutations = 0;
  for (const auto& [header, payload] : files) {
    const std::string good = header + std::string(payload, '\x05');
    REQUIRE_NOTHROW(decode_pgm(good));
    for (std::size_t pos = 0; pos < header.size(); ++pos)
      for (int b = 0; b < 256; ++b) {
        if (static_cast<char>(b) == header[pos]) continue;
        std::string bad = good;
        bad[pos] = static_cast<char>(b);
        CHECK_THROWS_AS(decode_pgm(bad), ParseError);
        ++mutations;
      }
  }
  CHECK(mutations >= 100);
}

TEST_CASE("calibration parsing") {
  const auto id = parse_calibration("HOMOGRAPHY 1 0 0 0 1 0 0 0 1");
  REQUIRE(std::holds_alternative<Homography>(id));
  CHECK(std::get<Homography>(id).matrix() == kIdentity3);

  const auto cam = parse_calibration("# camera\nPINHOLE 100 100 50 50\n1 0 0\n0 1 0\n0 0 1\n0 0 0\n");
  REQUIRE(std::holds_alternative<PinholeCamera>(cam));
  const auto& c = std::get<PinholeCamera>(cam);
  CHECK(c.center() == Vec3{0, 0, 0});
  const auto p = c.project({0, 0, 4});
  REQUIRE(p);
  CHECK(p->first == Vec2{50, 50});
  CHECK(p->second == 4.0);

  auto kind = [](std::string_view text) {
    try {
      parse_calibration(text);
    } catch (const CalibrationError& e) {
      return e.kind();
    }
    FAIL("accepted: " << text);
    return CalibrationError::Kind::degenerate;
  };
  CHECK(kind("AFFINE 1 0 0 0 1 0") == CalibrationError::Kind::bad_keyword);
  CHECK(kind("HOMOGRAPHY 1 0 0 0 1 0 0 0") == CalibrationError::Kind::token_count);
  CHECK(kind("HOMOGRAPHY 1 0 0 0 1 0 0 0 1 1") == CalibrationError::Kind::token_count);
  CHECK(kind("HOMOGRAPHY 1 0 0 0 x 0 0 0 1") == CalibrationError::Kind::bad_number);
  CHECK(kind("HOMOGRAPHY 1 0 0 0 nan 0 0 0 1") == CalibrationError::Kind::bad_number);
  CHECK(kind("HOMOGRAPHY 1 2 3 2 4 6 0 0 1") == CalibrationError::Kind::singular);
  CHECK(kind("PINHOLE 100 100 50 50 1 0.01 0 0 1 0 0 0 1 0 0 0") ==
        CalibrationError::Kind::non_orthonormal);
}

TEST_CASE("calibration text round-trips") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ang(-3, 3), f(50, 2000), t(-20, 20);
  for (int trial = 0; trial < 50; ++trial) {
    const Calibration h = Homography(oracle::random_homography(rng));
    const auto hb = std::get<Homography>(parse_calibration(format_calibration(h)));
    CHECK(oracle::max_normalised_diff(hb.matrix(), std::get<Homography>(h).matrix()) <= 1e-12);

    const PinholeCamera pc(f(rng), f(rng), f(rng), f(rng),
                           oracle::rotation(ang(rng), ang(rng) / 2, ang(rng)), {t(rng), t(rng), t(rng)});
    const auto cb = std::get<PinholeCamera>(parse_calibration(format_calibration(Calibration(pc))));
    CHECK(cb == pc);
  }
}

TEST_CASE("config: minimal file and defaults") {
  const auto c = parse_config(kMinimalConfig, "/data");
  CHECK(c.frame_count == 3);
  CHECK(c.output == fs::path("/data/out"));
  CHECK(c.min_votes == 0);
  CHECK(c.t_span == 100);
  CHECK(c.cumulative == CumulativeMode::sliding);
  REQUIRE(c.views.size() == 1);
  CHECK(c.views[0].calibration == fs::path("/data/cam0/calib.txt"));
  CHECK(c.views[0].frame_path(7) == fs::path("/data/cam0/f_007.ppm"));
  CHECK(c.rgb.theta_max == doctest::Approx(kDefaultThetaMax));
}

TEST_CASE("config: formatting round-trips") {
  auto c = parse_config(kMinimalConfig, "/data");
  c.grid.cell_size = 0.1;
  c.rgb.tau = 0.2f;
  c.t_span = 40;
  c.cumulative = CumulativeMode::full_history;
  const auto text = format_config(c, "/data");
  CHECK(text.find("cell_size = 0.1\n") != std::string::npos);
  CHECK(text.find("tau = 0.2\n") != std::string::npos);
  const auto back = parse_config(text, "/data");
  CHECK(format_config(back, "/data") == text);
  CHECK(back.grid == c.grid);
  CHECK(back.rgb.tau == c.rgb.tau);
  CHECK(back.cumulative == CumulativeMode::full_history);
}

TEST_CASE("config: errors") {
  const std::string base = kMinimalConfig;
  auto fails = [](const std::string& text, const std::string& needle) {
    try {
      parse_config(text, "/data");
    } catch (const Error& e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
      return;
    }
    FAIL("accepted config: " << text);
  };
  fails(base + "colour = red\n", "colour");
  fails("frames = 3\nframes = 4\n" + base.substr(base.find('\n') + 1), "line 2");
  fails(base + "[view.1]\nkind = depth\ncalibration = c\nframes = f%d\nbackground = b\n", "mixed");
  fails("frames = 0\n" + base.substr(base.find('\n') + 1), "frames");
  fails(base + "[grid]\ncell_size = -1\n", "cell_size");
  fails(base + "[cumulative]\nmode = weekly\n", "cumulative.mode");
  fails("frames = 3\n", "view");
  fails("frames = 3\nmin_votes = 2\n" + base.substr(base.find('\n') + 1), "min_votes");
  fails(base + "[view.1]\nkind = rgb\ncalibration = c\nframes = f.ppm\nbackground = b\n", "%d");
  fails(base + "[rgb\n", "line");
}

TEST_CASE("config: missing inputs are named") {
  const fs::path dir = fs::temp_directory_path() / "topgrid_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir / "cam0");
  write_file(dir / "config.ini", kMinimalConfig);
  write_file(dir / "cam0/calib.txt", "HOMOGRAPHY 1 0 0 0 1 0 0 0 1\n");
  write_file(dir / "cam0/bg.ppm", "x");
  write_file(dir / "cam0/f_000.ppm", "x");
  write_file(dir / "cam0/f_001.ppm", "x");
  try {
    load_config(dir / "config.ini");
    FAIL("missing frame not reported");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("f_002.ppm") != std::string::npos);
  }
  write_file(dir / "cam0/f_002.ppm", "x");
  CHECK_NOTHROW(load_config(dir / "config.ini"));
  fs::remove_all(dir);
}

TEST_CASE("expand_pattern") {
  CHECK(expand_pattern("a/frame_%06d.ppm", 42) == "a/frame_000042.ppm");
  CHECK(expand_pattern("f%d.pgm", 7) == "f7.pgm");
  CHECK_THROWS(expand_pattern("f.pgm", 1));
  CHECK_THROWS(expand_pattern("%d_%d", 1));
  CHECK_THROWS(expand_pattern("%s", 1));
}

}  // TEST_SUITE
