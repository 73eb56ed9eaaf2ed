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

#include "evd/framing.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

namespace evd {

std::vector<Frame> accumulate(std::span<const Event> events, std::size_t frame_size) {
  if (frame_size == 0) throw ConfigError("frame size must be at least 1");
  std::vector<Frame> frames;
  frames.reserve((events.size() + frame_size - 1) / frame_size);
  for (std::size_t begin = 0; begin < events.size(); begin += frame_size) {
    const auto count = std::min(frame_size, events.size() - begin);
    Frame f;
    f.index = frames.size();
    f.events = events.subspan(begin, count);
    const auto [lo, hi] = std::minmax_element(f.events.begin(), f.events.end(),
                                              [](const Event& a, const Event& b) { return a.t < b.t; });
    f.t_first = lo->t;
    f.t_last = hi->t;
    f.partial = count < frame_size;
    frames.push_back(f);
  }
  return frames;
}

FrameStats stats(std::span<const Event> events) {
  if (events.empty()) throw EmptyFrameError("cannot compute statistics of an empty frame");
  std::uint32_t lo = events.front().t;
  std::uint32_t hi = lo;
  for (const auto& e : events) {
    lo = std::min(lo, e.t);
    hi = std::max(hi, e.t);
  }
  return {events.size(), Micros{hi} - lo};
}

GrayImage render(std::span<const Event> events, const SensorGeometry& geometry) {
  GrayImage img{geometry.width, geometry.height, std::vector<std::uint8_t>(geometry.pixel_count(), 0)};
  for (const auto& e : events) {
    if (!geometry.contains(e.x, e.y)) {
      throw GeometryError("event (" + std::to_string(e.x) + "," + std::to_string(e.y) + ") outside sensor");
    }
    img.pixels[e.y * std::size_t{geometry.width} + e.x] = 255;
  }
  return img;
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("failed to write PGM image");
}

void write_pgm_file(const std::string& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_pgm(out, image);
}

std::string frame_file_name(const std::string& stem, std::size_t index) {
  return stem + "_" + std::to_string(index) + ".pgm";
}

}  // namespace evd
