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

#include "topgrid/io/calibration.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace topgrid::io {

namespace {

using Kind = CalibrationError::Kind;

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && text[i] != '#' && !std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
      out.push_back(text.substr(start, i - start));
    }
  }
  return out;
}

double number(std::string_view tok) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || end != tok.data() + tok.size() || !std::isfinite(v))
    throw CalibrationError(Kind::bad_number, "not a finite number: '" + std::string(tok) + "'");
  return v;
}

void append(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, " %.17g", v);
  out += buf;
}

}  // namespace

Calibration parse_calibration(std::string_view text) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw CalibrationError(Kind::bad_keyword, "empty calibration");
  const std::string_view key = tokens.front();
  const std::size_t expected = key == "HOMOGRAPHY" ? 9 : key == "PINHOLE" ? 16 : 0;
  if (expected == 0)
    throw CalibrationError(Kind::bad_keyword,
                           "expected HOMOGRAPHY or PINHOLE, got '" + std::string(key) + "'");
  if (tokens.size() - 1 != expected)
    throw CalibrationError(Kind::token_count, std::string(key) + " needs " +
                                                  std::to_string(expected) + " numbers, got " +
                                                  std::to_string(tokens.size() - 1));
  std::vector<double> v;
  for (std::size_t i = 1; i < tokens.size(); ++i) v.push_back(number(tokens[i]));

  if (expected == 9) {
    Mat3 m;
    std::copy(v.begin(), v.end(), m.begin());
    return Homography(m);
  }
  Mat3 r;
  std::copy(v.begin() + 4, v.begin() + 13, r.begin());
  return PinholeCamera(v[0], v[1], v[2], v[3], r, {v[13], v[14], v[15]}, kRotationTolerance);
}

std::string format_calibration(const Calibration& calibration) {
  std::string out;
  if (const auto* h = std::get_if<Homography>(&calibration)) {
    out = "HOMOGRAPHY\n";
    const Mat3& m = h->matrix();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) append(out, m[3 * r + c]);
      out += '\n';
    }
    return out;
  }
  const auto& cam = std::get<PinholeCamera>(calibration);
  out = "PINHOLE\n# fx fy cx cy\n";
  for (double v : {cam.fx(), cam.fy(), cam.cx(), cam.cy()}) append(out, v);
  out += "\n# rotation, row-major\n";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) append(out, cam.rotation()[3 * r + c]);
    out += '\n';
  }
  out += "# translation\n";
  for (double v : {cam.translation().x, cam.translation().y, cam.translation().z}) append(out, v);
  out += '\n';
  return out;
}

}  // namespace topgrid::io
