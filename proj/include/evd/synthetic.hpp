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
#include <vector>

#include "evd/event.hpp"

namespace evd {

enum class ShapeKind : std::uint8_t { disc, rectangle };

/// A solid object moving in pixel space. Positions are in pixels with
/// pixel (x, y) centred at (x + 0.5, y + 0.5); velocity is in pixels per
/// millisecond. With `bounce` set the object reflects off the sensor border
/// along every axis on which it fits.
struct Trajectory {
  ShapeKind shape = ShapeKind::disc;
  double radius = 20.0;      // disc
  double half_width = 10.0;  // rectangle
  double half_height = 10.0;
  double start_x = 64.0;
  double start_y = 64.0;
  double velocity_x = 1.0;
  double velocity_y = 0.0;
  bool bounce = true;
};

struct SyntheticConfig {
  SensorGeometry geometry;
  Micros duration_us = 1'000'000;
  Trajectory object;
  /// Background-activity rate per pixel, in events per second.
  double ba_rate_hz = 5.0;
  std::uint64_t seed = 1;
  /// CeleX only: width of one row-readout window.
  Micros celex_readout_us = 100;
};

/// Real events fire where the object's boundary sweeps across pixel
/// centres (ON on entry, OFF on exit); BA events are per-pixel Poisson
/// arrivals. Output is sorted by t with Real before BA on ties. In CeleX
/// mode events are regrouped into row runs sharing one timestamp.
std::vector<LabeledEvent> generate_synthetic(const SyntheticConfig& config);

/// Generates with `config`, doubling the duration until at least `count`
/// events exist, then keeps the first `count`.
std::vector<LabeledEvent> generate_event_count(SyntheticConfig config, std::size_t count);

}  // namespace evd
