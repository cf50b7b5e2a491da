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

// Binary netpbm codecs (P5 gray, P6 colour).
//
// Only the canonical header "P<n> <width> <height> <maxval>\n" is accepted:
// single spaces, no comments, no leading zeros. The payload must be exactly
// width * height * channels * bytes-per-sample long. Anything else raises a
// ParseError carrying the byte offset of the first bad byte.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "topgrid/image.hpp"

namespace topgrid::io {

/// Samples as stored on disk; maxval is 255 or 65535.
struct PgmImage {
  int maxval = 255;
  Plane<std::uint16_t> pixels;
};

using Rgb8Image = Plane<std::uint8_t, 3>;

std::string encode_pgm(const Plane<std::uint8_t>& img);
std::string encode_pgm16(const Plane<std::uint16_t>& img);  // big-endian samples
std::string encode_ppm(const Rgb8Image& img);

PgmImage decode_pgm(std::string_view bytes);
Rgb8Image decode_ppm(std::string_view bytes);

/// [0,1] floats <-> 8-bit samples, rounding to nearest.
Rgb8Image quantize(const ColorImage& img);
ColorImage dequantize(const Rgb8Image& img);

std::string encode_color(const ColorImage& img);
ColorImage decode_color(std::string_view bytes);

/// Depth as 16-bit millimetres, 0 = invalid. Ranges above 65.535 m throw.
std::string encode_depth(const DepthImage& img);
DepthImage decode_depth(std::string_view bytes, float max_range);

/// 0 / 255 8-bit PGM.
std::string encode_mask(const BinaryMask& mask);
/// Any nonzero 8-bit sample is set.
BinaryMask decode_mask(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace topgrid::io
