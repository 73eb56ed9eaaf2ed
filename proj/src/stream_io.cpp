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

#include "evd/stream_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace evd {
namespace {

constexpr std::string_view kMagic = "#evd1";

template <typename T>
bool parse_uint(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on ',' into at most N fields; returns the field count, or N+1 on overflow.
template <std::size_t N>
std::size_t split_fields(std::string_view line, std::array<std::string_view, N>& fields) {
  std::size_t n = 0;
  while (true) {
    const auto comma = line.find(',');
    if (n == N) return N + 1;
    fields[n++] = trim(line.substr(0, comma));
    if (comma == std::string_view::npos) return n;
    line.remove_prefix(comma + 1);
  }
}

}  // namespace

std::vector<LabeledEvent> EventStream::labeled_events() const {
  std::vector<LabeledEvent> out;
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    out.push_back({events[i], labeled() ? labels[i] : Label::real});
  }
  return out;
}

std::string format_header(const StreamHeader& header) {
  std::string line(kMagic);
  line += " X=" + std::to_string(header.geometry.width);
  line += " Y=" + std::to_string(header.geometry.height);
  line += " mode=";
  line += to_string(header.geometry.mode);
  line += " payload=";
  line += to_string(header.payload);
  return line;
}

StreamHeader parse_header(std::string_view line) {
  line = trim(line);
  if (line.substr(0, kMagic.size()) != kMagic) {
    throw ParseError(1, "missing '#evd1' header");
  }
  line.remove_prefix(kMagic.size());

  StreamHeader header;
  bool have_x = false, have_y = false, have_mode = false, have_payload = false;
  while (!(line = trim(line)).empty()) {
    const auto space = line.find_first_of(" \t");
    const auto token = line.substr(0, space);
    line.remove_prefix(space == std::string_view::npos ? line.size() : space);

    const auto eq = token.find('=');
    if (eq == std::string_view::npos) throw ParseError(1, "malformed header token '" + std::string(token) + "'");
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    try {
      if (key == "X") {
        have_x = parse_uint(value, header.geometry.width);
        if (!have_x) throw ParseError(1, "bad X value");
      } else if (key == "Y") {
        have_y = parse_uint(value, header.geometry.height);
        if (!have_y) throw ParseError(1, "bad Y value");
      } else if (key == "mode") {
        header.geometry.mode = parse_sensor_mode(value);
        have_mode = true;
      } else if (key == "payload") {
        header.payload = parse_payload_kind(value);
        have_payload = true;
      } else {
        throw ParseError(1, "unknown header key '" + std::string(key) + "'");
      }
    } catch (const ConfigError& e) {
      throw ParseError(1, e.what());
    }
  }
  if (!(have_x && have_y && have_mode && have_payload)) {
    throw ParseError(1, "header must declare X, Y, mode and payload");
  }
  try {
    header.geometry.validate();
  } catch (const ConfigError& e) {
    throw ParseError(1, e.what());
  }
  return header;
}

EventStream read_stream(std::istream& in, std::optional<SensorGeometry> geometry) {
  EventStream stream;
  bool have_header = false;
  if (geometry) {
    geometry->validate();
    stream.header.geometry = *geometry;
    stream.header.payload = default_payload(geometry->mode);
  }

  std::string raw;
  std::size_t line_no = 0;
  bool first_data = true;
  bool labeled = false;
  std::uint32_t last_t = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line_no == 1 && line.substr(0, kMagic.size()) == kMagic) {
        const auto parsed = parse_header(line);
        have_header = true;
        stream.header.payload = parsed.payload;
        if (!geometry) stream.header.geometry = parsed.geometry;
      }
      continue;
    }
    if (!have_header && !geometry) {
      throw ParseError(line_no, "stream has no '#evd1' header and no geometry was supplied");
    }

    std::array<std::string_view, 5> f{};
    const auto n = split_fields(line, f);
    if (n != 4 && n != 5) {
      throw ParseError(line_no, "expected 't,x,y,p' or 't,x,y,p,label', got '" + std::string(line) + "'");
    }
    if (first_data) {
      labeled = (n == 5);
      first_data = false;
    } else if (labeled != (n == 5)) {
      throw ParseError(line_no, "label column must be present on every line or on none");
    }

    std::uint32_t t = 0, x = 0, y = 0, p = 0;
    if (!parse_uint(f[0], t)) throw ParseError(line_no, "bad timestamp '" + std::string(f[0]) + "'");
    if (!parse_uint(f[1], x)) throw ParseError(line_no, "bad x '" + std::string(f[1]) + "'");
    if (!parse_uint(f[2], y)) throw ParseError(line_no, "bad y '" + std::string(f[2]) + "'");
    if (!parse_uint(f[3], p)) throw ParseError(line_no, "bad payload '" + std::string(f[3]) + "'");

    const auto limit = stream.header.payload == PayloadKind::polarity ? 1u : 255u;
    if (p > limit) {
      throw ParseError(line_no, "payload " + std::to_string(p) + " out of range for " +
                                    std::string(to_string(stream.header.payload)));
    }
    const auto& g = stream.header.geometry;
    if (!g.contains(x, y)) {
      throw GeometryError("line " + std::to_string(line_no) + ": event (" + std::to_string(x) + "," +
                          std::to_string(y) + ") outside " + std::to_string(g.width) + "x" +
                          std::to_string(g.height) + " sensor");
    }
    if (!stream.events.empty() && t < last_t) {
      throw OrderingError(line_no, "timestamp " + std::to_string(t) + " precedes " + std::to_string(last_t));
    }
    last_t = t;

    stream.events.push_back({t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                             static_cast<std::uint8_t>(p)});
    if (labeled) {
      if (f[4] == "real") {
        stream.labels.push_back(Label::real);
      } else if (f[4] == "ba") {
        stream.labels.push_back(Label::ba);
      } else {
        throw ParseError(line_no, "unknown label '" + std::string(f[4]) + "'");
      }
    }
  }
  if (in.bad()) throw IoError("read failure");
  return stream;
}

EventStream read_stream_file(const std::string& path, std::optional<SensorGeometry> geometry) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_stream(in, geometry);
}

namespace {

void write_line(std::ostream& out, const Event& e) {
  out << e.t << ',' << e.x << ',' << e.y << ',' << static_cast<unsigned>(e.payload);
}

void check(std::ostream& out) {
  if (!out) throw IoError("write failure");
}

}  // namespace

void write_stream(std::ostream& out, const StreamHeader& header, std::span<const Event> events) {
  out << format_header(header) << '\n';
  for (const auto& e : events) {
    write_line(out, e);
    out << '\n';
  }
  check(out);
}

void write_stream(std::ostream& out, const StreamHeader& header, std::span<const LabeledEvent> events) {
  out << format_header(header) << '\n';
  for (const auto& le : events) {
    write_line(out, le.event);
    out << ',' << to_string(le.label) << '\n';
  }
  check(out);
}

void write_stream(std::ostream& out, const EventStream& stream) {
  if (stream.labeled()) {
    const auto labeled = stream.labeled_events();
    write_stream(out, stream.header, std::span<const LabeledEvent>(labeled));
  } else {
    write_stream(out, stream.header, std::span<const Event>(stream.events));
  }
}

void write_stream_file(const std::string& path, const EventStream& stream) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_stream(out, stream);
  out.flush();
  check(out);
}

}  // namespace evd
