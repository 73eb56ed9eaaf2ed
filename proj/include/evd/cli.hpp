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
#include <string>
#include <vector>

#include "evd/eval.hpp"
#include "evd/filters.hpp"
#include "evd/stream_io.hpp"

namespace evd::cli {

/// Filter-related flags as given on the command line; unset fields fall
/// back to the per-filter defaults.
struct FilterOptions {
  std::string filter = "gf";
  std::uint32_t s = 1;
  std::optional<std::string> sf;
  std::optional<Micros> dt_us;
  std::optional<Micros> tgf_init_us;
};

/// Geometry flags; each one overrides the stream header when set.
struct GeometryOptions {
  std::optional<std::uint32_t> width;
  std::optional<std::uint32_t> height;
  std::optional<std::string> mode;
};

FilterSpec resolve_filter(const FilterOptions& options, const SensorGeometry& geometry);

/// Reads a stream file, applying any geometry overrides.
EventStream load_stream(const std::string& path, const GeometryOptions& overrides);

// Decisions sidecar: "#evd-decisions n=<count>" then one 0/1 per line.
void write_decisions(std::ostream& out, std::span<const FilterDecision> decisions);
std::vector<std::uint8_t> read_decisions(std::istream& in);

/// Entry point for the `evd` tool. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace evd::cli
