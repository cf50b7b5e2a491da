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

// Calibration text files.
//
//   HOMOGRAPHY h00 h01 h02 h10 h11 h12 h20 h21 h22
//   PINHOLE fx fy cx cy r00 r01 r02 r10 r11 r12 r20 r21 r22 tx ty tz
//
// Tokens are whitespace separated; '#' starts a comment that runs to the end
// of the line. Homographies map image pixels to ground meters.

#pragma once

#include <string>
#include <string_view>

#include "topgrid/pipeline.hpp"

namespace topgrid::io {

inline constexpr double kRotationTolerance = 1e-6;

/// Throws CalibrationError with a kind per failure class.
Calibration parse_calibration(std::string_view text);
/// Round-trips exactly through parse_calibration (17 significant digits).
std::string format_calibration(const Calibration& calibration);

}  // namespace topgrid::io
