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
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evd/event.hpp"
#include "evd/framing.hpp"

namespace evd {

__extension__ using UInt128 = unsigned __int128;

enum class FilterKind : std::uint8_t { gf, bs1, bs2, bs3 };

std::string_view to_string(FilterKind kind) noexcept;
FilterKind parse_filter_kind(std::string_view text);

/// Positive rational SF.
struct ScalingFactor {
  std::uint64_t num = 10;
  std::uint64_t den = 1;

  /// Accepts "10", "0.2", "3/7".
  static ScalingFactor parse(std::string_view text);
  static ScalingFactor of(std::uint64_t num, std::uint64_t den = 1);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator==(const ScalingFactor&, const ScalingFactor&) = default;
};

/// SF = 10 for standard sensors, 0.2 for CeleX row-timestamp sensors.
ScalingFactor default_scaling_factor(SensorMode mode) noexcept;

/// Fixed baseline threshold: 500 us (Bs1), 500*s^2 us (Bs2),
/// max(1, floor(500/X)) us (Bs3). GF uses it only as a constant override.
Micros default_fixed_threshold(FilterKind kind, const SensorGeometry& geometry, std::uint32_t s);

inline constexpr Micros kDefaultGfInitialThreshold = 1000;

struct FilterConfig {
  SensorGeometry geometry;
  std::uint32_t s = 1;
  ScalingFactor sf;
  Micros dt_fixed_us = 500;
  Micros tgf_init_us = kDefaultGfInitialThreshold;
  /// GF only: pin the threshold instead of deriving it from frame stats.
  std::optional<Micros> gf_threshold_override;

  static FilterConfig defaults(FilterKind kind, const SensorGeometry& geometry, std::uint32_t s = 1);
  void validate() const;
};

struct GfThreshold {
  Micros value = kDefaultGfInitialThreshold;
  /// Frame whose statistics produced the value; empty for the initial value.
  std::optional<std::size_t> frame_index;
};

/// Unfloored threshold as numerator / denominator.
struct ThresholdRatio {
  UInt128 num = 0;
  UInt128 den = 1;
};

/// TD*X*Y / (s^2*FN*SF), with an extra factor X in CeleX mode.
ThresholdRatio gf_threshold_exact(const FrameStats& stats, const FilterConfig& config);

/// gf_threshold_exact floored to whole microseconds, minimum 1.
GfThreshold gf_threshold(const FrameStats& stats, const FilterConfig& config,
                         std::optional<std::size_t> frame_index = std::nullopt);

struct FilterDecision {
  Event event;
  bool passed = false;

  friend bool operator==(const FilterDecision&, const FilterDecision&) = default;
};

inline constexpr std::uint64_t kNeverWritten = std::numeric_limits<std::uint64_t>::max();

// Timestamp memories. Every cell starts as kNeverWritten; a never-written
// cell never supports an event.

/// One cell per s x s pixel group; s == 1 is one cell per pixel.
class SubsampledMemory {
 public:
  SubsampledMemory(const SensorGeometry& geometry, std::uint32_t s);

  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t cell_index(std::uint16_t x, std::uint16_t y) const noexcept { return col_offset_[x] + row_offset_[y]; }
  std::uint64_t cell(std::uint16_t x, std::uint16_t y) const noexcept { return cells_[cell_index(x, y)]; }

  /// Compares t against the stored timestamp, then overwrites it.
  bool check_and_store(const Event& e, Micros threshold) noexcept {
    auto& slot = cells_[cell_index(e.x, e.y)];
    const auto prev = slot;
    slot = e.t;
    return (prev != kNeverWritten) & (Micros{e.t} - prev <= threshold);
  }

  void reset();

 private:
  std::vector<std::size_t> col_offset_;
  std::vector<std::size_t> row_offset_;
  std::vector<std::uint64_t> cells_;
};

/// One cell per pixel, written over the 3x3 neighbourhood of each event.
class NeighborhoodMemory {
 public:
  explicit NeighborhoodMemory(const SensorGeometry& geometry);

  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::uint64_t cell(std::uint16_t x, std::uint16_t y) const noexcept { return cells_[y * std::size_t{width_} + x]; }

  bool check_and_store(const Event& e, Micros threshold) noexcept;
  void reset();

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<std::uint64_t> cells_;
};

/// Two cells per row and two per column: last timestamp plus the
/// cross-axis position and payload of the event that wrote it.
class RowColumnMemory {
 public:
  struct Cell {
    std::uint64_t t = kNeverWritten;
    std::uint16_t position = 0;
    std::uint8_t payload = 0;
  };

  explicit RowColumnMemory(const SensorGeometry& geometry);

  /// Row cells plus column cells, each a (timestamp, position) pair.
  std::size_t cell_count() const noexcept { return 2 * (rows_.size() + cols_.size()); }
  const Cell& row(std::uint16_t y) const noexcept { return rows_[y]; }
  const Cell& column(std::uint16_t x) const noexcept { return cols_[x]; }

  bool check_and_store(const Event& e, Micros threshold) noexcept;
  void reset();

 private:
  std::vector<Cell> rows_;
  std::vector<Cell> cols_;
};

/// Stateful per-stream filter. One instance serves exactly one stream.
class EventFilter {
 public:
  virtual ~EventFilter() = default;

  virtual FilterKind kind() const noexcept = 0;
  virtual std::string name() const = 0;
  /// Writes one pass flag (0/1) per event into `passed`, which must be
  /// the same length as `events`. Memory carries over between calls.
  virtual void process(std::span<const Event> events, std::span<std::uint8_t> passed) = 0;
  virtual void reset() = 0;

  std::vector<FilterDecision> decide(std::span<const Event> events);
};

/// GF as a streaming filter: counts events into frames of `frame_size`
/// and switches threshold at each frame boundary using the stats of the
/// frame just completed.
class GfFilter final : public EventFilter {
 public:
  GfFilter(const FilterConfig& config, std::size_t frame_size);

  FilterKind kind() const noexcept override { return FilterKind::gf; }
  std::string name() const override;
  void process(std::span<const Event> events, std::span<std::uint8_t> passed) override;
  void reset() override;

  bool accept(const Event& e);
  const GfThreshold& threshold() const noexcept { return threshold_; }
  const SubsampledMemory& memory() const noexcept { return memory_; }

 private:
  FilterConfig config_;
  std::size_t frame_size_;
  SubsampledMemory memory_;
  GfThreshold threshold_;
  std::size_t frame_index_ = 0;
  std::size_t in_frame_ = 0;
  std::uint32_t frame_min_t_ = 0;
  std::uint32_t frame_max_t_ = 0;
};

class Bs1Filter final : public EventFilter {
 public:
  explicit Bs1Filter(const FilterConfig& config);

  FilterKind kind() const noexcept override { return FilterKind::bs1; }
  std::string name() const override { return "bs1"; }
  void process(std::span<const Event> events, std::span<std::uint8_t> passed) override;
  void reset() override { memory_.reset(); }

  bool accept(const Event& e);
  const NeighborhoodMemory& memory() const noexcept { return memory_; }

 private:
  FilterConfig config_;
  NeighborhoodMemory memory_;
};

class Bs2Filter final : public EventFilter {
 public:
  explicit Bs2Filter(const FilterConfig& config);

  FilterKind kind() const noexcept override { return FilterKind::bs2; }
  std::string name() const override;
  void process(std::span<const Event> events, std::span<std::uint8_t> passed) override;
  void reset() override { memory_.reset(); }

  bool accept(const Event& e);
  const SubsampledMemory& memory() const noexcept { return memory_; }

 private:
  FilterConfig config_;
  SubsampledMemory memory_;
};

class Bs3Filter final : public EventFilter {
 public:
  explicit Bs3Filter(const FilterConfig& config);

  FilterKind kind() const noexcept override { return FilterKind::bs3; }
  std::string name() const override { return "bs3"; }
  void process(std::span<const Event> events, std::span<std::uint8_t> passed) override;
  void reset() override { memory_.reset(); }

  bool accept(const Event& e);
  const RowColumnMemory& memory() const noexcept { return memory_; }

 private:
  FilterConfig config_;
  RowColumnMemory memory_;
};

/// `frame_size` only matters for GF.
std::unique_ptr<EventFilter> make_filter(FilterKind kind, const FilterConfig& config, std::size_t frame_size);

/// GF over pre-built frames: frame 0 uses tgf_init_us, frame k uses the
/// threshold derived from frame k-1. Memory persists across frames.
std::vector<FilterDecision> gf_process(std::span<const Frame> frames, const FilterConfig& config);
std::vector<FilterDecision> bs1_process(std::span<const Event> events, const FilterConfig& config);
std::vector<FilterDecision> bs2_process(std::span<const Event> events, const FilterConfig& config);
std::vector<FilterDecision> bs3_process(std::span<const Event> events, const FilterConfig& config);

/// Fresh filter of `kind` over the whole stream.
std::vector<FilterDecision> run_filter(FilterKind kind, const FilterConfig& config, std::span<const Event> events,
                                       std::size_t frame_size);

struct Classified {
  std::vector<Event> passed;
  std::vector<Event> discarded;
};

Classified classify(std::span<const FilterDecision> decisions);

}  // namespace evd
