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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evd/event.hpp"

namespace evd {

/// A fixed-event-count slice of a stream. `events` views the source
/// sequence, which must outlive the frame.
struct Frame {
  std::size_t index = 0;
  std::span<const Event> events;
  std::uint32_t t_first = 0;
  std::uint32_t t_last = 0;
  /// Set on a trailing frame holding fewer than the requested count.
  bool partial = false;
};

struct FrameStats {
  std::uint64_t event_count = 0;  // FN
  Micros time_span = 0;           // TD

  friend bool operator==(const FrameStats&, const FrameStats&) = default;
};

std::vector<Frame> accumulate(std::span<const Event> events, std::size_t frame_size);

FrameStats stats(std::span<const Event> events);
inline FrameStats stats(const Frame& frame) { return stats(frame.events); }

/// Row-major 8-bit image, width * height bytes.
struct GrayImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(std::uint32_t x, std::uint32_t y) const { return pixels[y * std::size_t{width} + x]; }
};

/// 255 where at least one event landed, 0 elsewhere.
GrayImage render(std::span<const Event> events, const SensorGeometry& geometry);
inline GrayImage render(const Frame& frame, const SensorGeometry& geometry) {
  return render(frame.events, geometry);
}

void write_pgm(std::ostream& out, const GrayImage& image);
void write_pgm_file(const std::string& path, const GrayImage& image);
std::string frame_file_name(const std::string& stem, std::size_t index);

}  // namespace evd
