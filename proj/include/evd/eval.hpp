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

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evd/filters.hpp"

namespace evd {

/// A filter kind plus its configuration; enough to build fresh instances.
struct FilterSpec {
  FilterKind kind = FilterKind::gf;
  FilterConfig config;

  std::string name() const;
};

/// Labels each event Real where `reference` passes it and BA otherwise.
std::vector<LabeledEvent> label_with_reference(std::span<const Event> events, const FilterSpec& reference,
                                               std::size_t frame_size);

struct FrameConfusion {
  std::size_t frame_index = 0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  /// Absent when the frame has no Real (tpr) or no BA (fpr) events.
  std::optional<double> tpr;
  std::optional<double> fpr;
  bool partial = false;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

/// Per fixed-count frame confusion of `decisions` against `labeled`.
/// Both sequences must describe the same events in the same order.
std::vector<FrameConfusion> confusion(std::span<const LabeledEvent> labeled,
                                      std::span<const FilterDecision> decisions, std::size_t frame_size);

/// Averages of the present ratios over full frames only.
struct ConfusionSummary {
  std::optional<double> mean_tpr;
  std::optional<double> mean_fpr;
  std::size_t frames = 0;
};
ConfusionSummary summarize(std::span<const FrameConfusion> frames);

struct BenchReport {
  std::string filter;
  std::uint64_t events = 0;
  std::size_t frame_size = 0;
  std::chrono::nanoseconds wall{0};
  std::size_t repetitions = 0;

  double wall_us() const noexcept { return static_cast<double>(wall.count()) / 1e3; }
  double events_per_second() const noexcept;
};

/// Times the decision loop (including GF threshold updates) on a fresh
/// filter per repetition and keeps the fastest run.
BenchReport bench(const FilterSpec& filter, std::span<const Event> events, std::size_t frame_size,
                  std::size_t repetitions);

void write_confusion_csv(std::ostream& out, std::span<const FrameConfusion> rows);
void write_bench_csv(std::ostream& out, std::span<const BenchReport> rows);

std::vector<FrameConfusion> parse_confusion_csv(std::istream& in);
std::vector<BenchReport> parse_bench_csv(std::istream& in);

inline constexpr std::string_view kConfusionCsvHeader = "frame,tp,fp,tn,fn,tpr,fpr";
inline constexpr std::string_view kBenchCsvHeader = "filter,frame_size,events,wall_us,events_per_s";

}  // namespace evd
