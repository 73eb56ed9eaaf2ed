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

#include "evd/event.hpp"

#include <string>

namespace evd {

void SensorGeometry::validate() const {
  if (width == 0 || height == 0) {
    throw ConfigError("sensor geometry must be at least 1x1, got " + std::to_string(width) + "x" +
                      std::to_string(height));
  }
  if (width > 65536 || height > 65536) {
    throw ConfigError("sensor geometry exceeds 16-bit coordinates");
  }
}

std::string_view to_string(SensorMode mode) noexcept {
  return mode == SensorMode::celex_row_timestamp ? "celex" : "standard";
}

std::string_view to_string(PayloadKind kind) noexcept {
  return kind == PayloadKind::intensity ? "intensity" : "polarity";
}

std::string_view to_string(Label label) noexcept { return label == Label::ba ? "ba" : "real"; }

SensorMode parse_sensor_mode(std::string_view text) {
  if (text == "standard") return SensorMode::standard;
  if (text == "celex") return SensorMode::celex_row_timestamp;
  throw ConfigError("unknown sensor mode '" + std::string(text) + "'");
}

PayloadKind parse_payload_kind(std::string_view text) {
  if (text == "polarity") return PayloadKind::polarity;
  if (text == "intensity") return PayloadKind::intensity;
  throw ConfigError("unknown payload kind '" + std::string(text) + "'");
}

PayloadKind default_payload(SensorMode mode) noexcept {
  return mode == SensorMode::celex_row_timestamp ? PayloadKind::intensity : PayloadKind::polarity;
}

}  // namespace evd
