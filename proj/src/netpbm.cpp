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

#include "topgrid/io/netpbm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

namespace topgrid::io {

namespace {

using Kind = ParseError::Kind;

std::string header(char magic, int w, int h, int maxval) {
  return std::string("P") + magic + ' ' + std::to_string(w) + ' ' + std::to_string(h) + ' ' +
         std::to_string(maxval) + '\n';
}

struct Header {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t payload = 0;  // offset of the first sample byte
};

// Canonical decimal: no sign, no leading zero, at most 9 digits, nonzero.
int parse_field(std::string_view s, std::size_t& pos, char terminator, Kind kind, const char* what) {
  const std::size_t start = pos;
  long value = 0;
  while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
    if (pos - start >= 9) throw ParseError(kind, pos, std::string(what) + " too large");
    value = value * 10 + (s[pos] - '0');
    ++pos;
  }
  if (pos == start) throw ParseError(kind, pos, std::string("expected ") + what);
  if (s[start] == '0') throw ParseError(kind, start, std::string(what) + " must be positive without leading zeros");
  if (pos >= s.size()) throw ParseError(Kind::truncated, pos, "header ends early");
  if (s[pos] != terminator) throw ParseError(Kind::bad_header, pos, "unexpected byte in header");
  ++pos;
  return static_cast<int>(value);
}

Header parse_header(std::string_view s, char magic) {
  if (s.size() < 2) throw ParseError(Kind::truncated, s.size(), "missing magic number");
  if (s[0] != 'P') throw ParseError(Kind::bad_magic, 0, "not a netpbm file");
  if (s[1] != magic)
    throw ParseError(Kind::bad_magic, 1, std::string("expected P") + magic + " netpbm");
  if (s.size() < 3) throw ParseError(Kind::truncated, 2, "header ends early");
  if (s[2] != ' ') throw ParseError(Kind::bad_header, 2, "expected a single space after magic");
  Header h;
  std::size_t pos = 3;
  h.width = parse_field(s, pos, ' ', Kind::bad_header, "width");
  h.height = parse_field(s, pos, ' ', Kind::bad_header, "height");
  const std::size_t mv_at = pos;
  h.maxval = parse_field(s, pos, '\n', Kind::bad_maxval, "maxval");
  if (h.maxval != 255 && h.maxval != 65535)
    throw ParseError(Kind::bad_maxval, mv_at, "maxval must be 255 or 65535");
  h.payload = pos;
  return h;
}

void check_payload(std::string_view s, const Header& h, int channels) {
  const std::size_t bytes = static_cast<std::size_t>(h.width) * h.height * channels *
                            (h.maxval == 255 ? 1 : 2);
  const std::size_t have = s.size() - h.payload;
  if (have < bytes)
    throw ParseError(Kind::truncated, s.size(),
                     "payload truncated: " + std::to_string(have) + " of " +
                         std::to_string(bytes) + " bytes");
  if (have > bytes) throw ParseError(Kind::bad_value, h.payload + bytes, "trailing bytes after payload");
}

std::uint8_t to_byte(float v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

}  // namespace

std::string encode_pgm(const Plane<std::uint8_t>& img) {
  std::string out = header('5', img.width(), img.height(), 255);
  out.append(img.data().begin(), img.data().end());
  return out;
}

std::string encode_pgm16(const Plane<std::uint16_t>& img) {
  std::string out = header('5', img.width(), img.height(), 65535);
  out.reserve(out.size() + 2 * img.pixel_count());
  for (std::uint16_t v : img.data()) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

std::string encode_ppm(const Rgb8Image& img) {
  std::string out = header('6', img.width(), img.height(), 255);
  out.append(img.data().begin(), img.data().end());
  return out;
}

PgmImage decode_pgm(std::string_view s) {
  const Header h = parse_header(s, '5');
  check_payload(s, h, 1);
  PgmImage out;
  out.maxval = h.maxval;
  out.pixels = Plane<std::uint16_t>(h.width, h.height);
  const auto* p = reinterpret_cast<const unsigned char*>(s.data() + h.payload);
  for (std::size_t i = 0; i < out.pixels.pixel_count(); ++i)
    out.pixels[i] = h.maxval == 255 ? p[i] : static_cast<std::uint16_t>(p[2 * i] << 8 | p[2 * i + 1]);
  return out;
}

Rgb8Image decode_ppm(std::string_view s) {
  const Header h = parse_header(s, '6');
  if (h.maxval != 255) throw ParseError(Kind::bad_maxval, 0, "only 8-bit PPM is supported");
  check_payload(s, h, 3);
  Rgb8Image out(h.width, h.height);
  std::copy(s.begin() + static_cast<std::ptrdiff_t>(h.payload), s.end(), out.data().begin());
  return out;
}

Rgb8Image quantize(const ColorImage& img) {
  Rgb8Image out(img.width(), img.height());
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] = to_byte(img.data()[i]);
  return out;
}

ColorImage dequantize(const Rgb8Image& img) {
  ColorImage out(img.width(), img.height());
  for (std::size_t i = 0; i < out.data().size(); ++i)
    out.data()[i] = static_cast<float>(img.data()[i] / 255.0);
  return out;
}

std::string encode_color(const ColorImage& img) { return encode_ppm(quantize(img)); }
ColorImage decode_color(std::string_view bytes) { return dequantize(decode_ppm(bytes)); }

std::string encode_depth(const DepthImage& img) {
  Plane<std::uint16_t> mm(img.width(), img.height());
  for (std::size_t i = 0; i < mm.pixel_count(); ++i) {
    const double v = std::round(static_cast<double>(img.range[i]) * 1000.0);
    if (!(v >= 0.0 && v <= 65535.0)) throw Error("depth sample does not fit 16-bit millimetres");
    mm[i] = static_cast<std::uint16_t>(v);
  }
  return encode_pgm16(mm);
}

DepthImage decode_depth(std::string_view bytes, float max_range) {
  const PgmImage pgm = decode_pgm(bytes);
  if (pgm.maxval != 65535) throw ParseError(Kind::bad_maxval, 0, "depth images must be 16-bit");
  DepthImage d;
  d.max_range = max_range;
  d.range = Plane<float>(pgm.pixels.width(), pgm.pixels.height());
  for (std::size_t i = 0; i < d.range.pixel_count(); ++i)
    d.range[i] = static_cast<float>(pgm.pixels[i] / 1000.0);
  return d;
}

std::string encode_mask(const BinaryMask& mask) {
  Plane<std::uint8_t> out(mask.width(), mask.height());
  for (std::size_t i = 0; i < out.pixel_count(); ++i) out[i] = mask[i] ? 255 : 0;
  return encode_pgm(out);
}

BinaryMask decode_mask(std::string_view bytes) {
  const PgmImage pgm = decode_pgm(bytes);
  if (pgm.maxval != 255) throw ParseError(Kind::bad_maxval, 0, "masks must be 8-bit");
  BinaryMask out(pgm.pixels.width(), pgm.pixels.height());
  for (std::size_t i = 0; i < out.pixel_count(); ++i) out[i] = pgm.pixels[i] ? 1 : 0;
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace topgrid::io
