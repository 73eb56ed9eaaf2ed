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

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "evd/event.hpp"

namespace evd {

// Text stream format:
//
//   #evd1 X=<int> Y=<int> mode=<standard|celex> payload=<polarity|intensity>
//   t,x,y,p
//   t,x,y,p[,real|ba]
//
// Blank lines and further '#' lines after the header are ignored. The label
// column is all-or-nothing within one file.

struct StreamHeader {
  SensorGeometry geometry;
  PayloadKind payload = PayloadKind::polarity;

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

struct EventStream {
  StreamHeader header;
  std::vector<Event> events;
  /// Empty for unlabeled streams, otherwise one label per event.
  std::vector<Label> labels;

  bool labeled() const noexcept { return !labels.empty(); }
  std::vector<LabeledEvent> labeled_events() const;
};

/// Parses a stream. When `geometry` is given it overrides the header's
/// geometry and is used for bounds checks; otherwise the header is
/// mandatory.
EventStream read_stream(std::istream& in, std::optional<SensorGeometry> geometry = std::nullopt);
EventStream read_stream_file(const std::string& path,
                             std::optional<SensorGeometry> geometry = std::nullopt);

void write_stream(std::ostream& out, const StreamHeader& header, std::span<const Event> events);
void write_stream(std::ostream& out, const StreamHeader& header,
                  std::span<const LabeledEvent> events);
void write_stream(std::ostream& out, const EventStream& stream);
void write_stream_file(const std::string& path, const EventStream& stream);

std::string format_header(const StreamHeader& header);
StreamHeader parse_header(std::string_view line);

}  // namespace evd
