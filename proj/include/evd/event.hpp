// Copyright 2026 The evdenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evd {

/// Timestamps and durations, in microseconds.
using Micros = std::uint64_t;

// Error taxonomy. Everything derives from evd::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class OrderingError : public Error {
 public:
  OrderingError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyFrameError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class SensorMode : std::uint8_t { standard, celex_row_timestamp };

enum class PayloadKind : std::uint8_t { polarity, intensity };

struct SensorGeometry {
  std::uint32_t width = 128;
  std::uint32_t height = 128;
  SensorMode mode = SensorMode::standard;

  static SensorGeometry dvs128() { return {128, 128, SensorMode::standard}; }
  static SensorGeometry davis240() { return {240, 180, SensorMode::standard}; }
  static SensorGeometry celex4() { return {768, 640, SensorMode::celex_row_timestamp}; }

  /// Throws ConfigError on zero width or height.
  void validate() const;
  bool contains(std::uint32_t x, std::uint32_t y) const noexcept { return x < width && y < height; }
  std::uint64_t pixel_count() const noexcept { return std::uint64_t{width} * height; }

  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

inline constexpr std::uint8_t kPolarityOff = 0;
inline constexpr std::uint8_t kPolarityOn = 1;
inline constexpr std::uint8_t kCelexIntensity = 128;

/// One sensor spike. `payload` is a polarity (0/1) or an intensity byte,
/// depending on the stream's PayloadKind; filters never look at it.
struct Event {
  std::uint32_t t = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::uint8_t payload = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

enum class Label : std::uint8_t { real, ba };

struct LabeledEvent {
  Event event;
  Label label = Label::real;

  friend bool operator==(const LabeledEvent&, const LabeledEvent&) = default;
};

std::string_view to_string(SensorMode mode) noexcept;
std::string_view to_string(PayloadKind kind) noexcept;
std::string_view to_string(Label label) noexcept;

SensorMode parse_sensor_mode(std::string_view text);
PayloadKind parse_payload_kind(std::string_view text);

/// Natural payload for a sensor: intensity for CeleX, polarity otherwise.
PayloadKind default_payload(SensorMode mode) noexcept;

}  // namespace evd
