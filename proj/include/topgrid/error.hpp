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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topgrid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  DimensionError(const char* what, int w0, int h0, int w1, int h1)
      : Error(std::string(what) + ": dimension mismatch " +
              std::to_string(w0) + "x" + std::to_string(h0) + " vs " +
              std::to_string(w1) + "x" + std::to_string(h1)) {}
};

/// Thrown when a ground-plane mapping is undefined (point on the horizon line)
/// or a depth sample is invalid. Callers skip the pixel.
class UnmappableError : public Error {
 public:
  using Error::Error;
};

/// Netpbm / config parse failure at a byte offset in the input.
class ParseError : public Error {
 public:
  enum class Kind { bad_magic, bad_header, bad_maxval, truncated, bad_value };

  ParseError(Kind kind, std::size_t offset, const std::string& msg)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

class CalibrationError : public Error {
 public:
  enum class Kind { bad_keyword, token_count, bad_number, non_orthonormal, singular, degenerate };

  CalibrationError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Wraps a failure inside one pipeline stage so the caller knows which.
class StageError : public Error {
 public:
  StageError(std::string stage, int view_id, const std::string& msg)
      : Error("view " + std::to_string(view_id) + ", stage " + stage + ": " + msg),
        stage_(std::move(stage)),
        view_id_(view_id) {}

  const std::string& stage() const { return stage_; }
  int view_id() const { return view_id_; }

 private:
  std::string stage_;
  int view_id_;
};

}  // namespace topgrid
