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

#include "evd/filters.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace evd {
namespace {

[[noreturn, gnu::noinline, gnu::cold]] void throw_outside(const SensorGeometry& g, const Event& e) {
  throw GeometryError("event (" + std::to_string(e.x) + "," + std::to_string(e.y) + ") at t=" + std::to_string(e.t) +
                      " outside " + std::to_string(g.width) + "x" + std::to_string(g.height) + " sensor");
}

inline void require_inside(const SensorGeometry& g, const Event& e) {
  if (!g.contains(e.x, e.y)) [[unlikely]] throw_outside(g, e);
}

void require_same_length(std::span<const Event> events, std::span<std::uint8_t> passed) {
  if (events.size() != passed.size()) throw AlignmentError("decision buffer length differs from event count");
}

std::uint32_t ceil_div(std::uint32_t a, std::uint32_t b) { return (a + b - 1) / b; }

template <typename Filter>
void process_all(Filter& filter, std::span<const Event> events, std::span<std::uint8_t> passed) {
  require_same_length(events, passed);
  for (std::size_t i = 0; i < events.size(); ++i) passed[i] = filter.accept(events[i]);
}

template <typename Filter>
std::vector<FilterDecision> decide_with(Filter&& filter, std::span<const Event> events) {
  std::vector<FilterDecision> out;
  out.reserve(events.size());
  for (const auto& e : events) out.push_back({e, filter.accept(e)});
  return out;
}

}  // namespace

std::string_view to_string(FilterKind kind) noexcept {
  switch (kind) {
    case FilterKind::gf: return "gf";
    case FilterKind::bs1: return "bs1";
    case FilterKind::bs2: return "bs2";
    case FilterKind::bs3: return "bs3";
  }
  return "?";
}

FilterKind parse_filter_kind(std::string_view text) {
  if (text == "gf") return FilterKind::gf;
  if (text == "bs1") return FilterKind::bs1;
  if (text == "bs2") return FilterKind::bs2;
  if (text == "bs3") return FilterKind::bs3;
  throw ConfigError("unknown filter '" + std::string(text) + "' (expected gf, bs1, bs2 or bs3)");
}

// ---- ScalingFactor ---------------------------------------------------------

ScalingFactor ScalingFactor::of(std::uint64_t num, std::uint64_t den) {
  if (num == 0 || den == 0) throw ConfigError("scaling factor must be positive");
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

ScalingFactor ScalingFactor::parse(std::string_view text) {
  auto fail = [&]() -> ScalingFactor {
    throw ConfigError("invalid scaling factor '" + std::string(text) + "'");
  };
  auto parse_digits = [&](std::string_view digits, std::uint64_t& out) {
    if (digits.empty() || digits.size() > 9) return false;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
    return ec == std::errc{} && ptr == digits.data() + digits.size();
  };

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    std::uint64_t n = 0, d = 0;
    if (!parse_digits(text.substr(0, slash), n) || !parse_digits(text.substr(slash + 1), d)) return fail();
    if (n == 0 || d == 0) return fail();
    return of(n, d);
  }

  const auto dot = text.find('.');
  const auto whole = text.substr(0, dot);
  const auto frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  std::uint64_t w = 0, f = 0;
  if (!whole.empty() && !parse_digits(whole, w)) return fail();
  if (!frac.empty() && !parse_digits(frac, f)) return fail();
  if (whole.empty() && frac.empty()) return fail();
  std::uint64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const auto num = w * scale + f;
  if (num == 0) return fail();
  return of(num, scale);
}

std::string ScalingFactor::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

ScalingFactor default_scaling_factor(SensorMode mode) noexcept {
  return mode == SensorMode::celex_row_timestamp ? ScalingFactor{1, 5} : ScalingFactor{10, 1};
}

// ---- configuration -----------------------------------------------------------

Micros default_fixed_threshold(FilterKind kind, const SensorGeometry& geometry, std::uint32_t s) {
  switch (kind) {
    case FilterKind::bs2: return Micros{500} * s * s;
    case FilterKind::bs3: return std::max<Micros>(1, 500 / std::max<std::uint32_t>(geometry.width, 1));
    case FilterKind::gf:
    case FilterKind::bs1: return 500;
  }
  return 500;
}

FilterConfig FilterConfig::defaults(FilterKind kind, const SensorGeometry& geometry, std::uint32_t s) {
  FilterConfig c;
  c.geometry = geometry;
  c.s = (kind == FilterKind::gf || kind == FilterKind::bs2) ? s : 1;
  c.sf = default_scaling_factor(geometry.mode);
  c.dt_fixed_us = default_fixed_threshold(kind, geometry, c.s);
  c.tgf_init_us = kDefaultGfInitialThreshold;
  return c;
}

void FilterConfig::validate() const {
  geometry.validate();
  if (s == 0) throw ConfigError("subsampling factor s must be at least 1");
  if (s > 65536) throw ConfigError("subsampling factor s is larger than any sensor");
  if (sf.num == 0 || sf.den == 0) throw ConfigError("scaling factor must be positive");
}

// ---- threshold ------------------------------------------------------------

ThresholdRatio gf_threshold_exact(const FrameStats& stats, const FilterConfig& config) {
  if (stats.event_count == 0) throw EmptyFrameError("GF threshold needs at least one event in the frame");
  config.validate();
  const UInt128 x = config.geometry.width;
  const UInt128 y = config.geometry.height;
  UInt128 num = UInt128{stats.time_span} * x * y * config.sf.den;
  if (config.geometry.mode == SensorMode::celex_row_timestamp) num *= x;
  const UInt128 s = config.s;
  const UInt128 den = s * s * UInt128{stats.event_count} * config.sf.num;
  return {num, den};
}

GfThreshold gf_threshold(const FrameStats& stats, const FilterConfig& config, std::optional<std::size_t> frame_index) {
  const auto r = gf_threshold_exact(stats, config);
  const UInt128 q = r.num / r.den;
  const UInt128 cap = std::numeric_limits<Micros>::max();
  const Micros value = q > cap ? std::numeric_limits<Micros>::max() : static_cast<Micros>(q);
  return {std::max<Micros>(value, 1), frame_index};
}

// ---- memories ---------------------------------------------------------------

SubsampledMemory::SubsampledMemory(const SensorGeometry& geometry, std::uint32_t s) {
  geometry.validate();
  if (s == 0) throw ConfigError("subsampling factor s must be at least 1");
  const auto cols = ceil_div(geometry.width, s);
  const auto rows = ceil_div(geometry.height, s);
  col_offset_.resize(geometry.width);
  row_offset_.resize(geometry.height);
  for (std::uint32_t x = 0; x < geometry.width; ++x) col_offset_[x] = x / s;
  for (std::uint32_t y = 0; y < geometry.height; ++y) row_offset_[y] = std::size_t{y / s} * cols;
  cells_.assign(std::size_t{cols} * rows, kNeverWritten);
}

void SubsampledMemory::reset() { std::fill(cells_.begin(), cells_.end(), kNeverWritten); }

NeighborhoodMemory::NeighborhoodMemory(const SensorGeometry& geometry)
    : width_(geometry.width), height_(geometry.height) {
  geometry.validate();
  cells_.assign(geometry.pixel_count(), kNeverWritten);
}

bool NeighborhoodMemory::check_and_store(const Event& e, Micros threshold) noexcept {
  const std::size_t w = width_;
  const auto own = cells_[e.y * w + e.x];
  const bool pass = (own != kNeverWritten) & (Micros{e.t} - own <= threshold);

  const std::uint32_t x0 = e.x > 0 ? e.x - 1u : 0u;
  const std::uint32_t x1 = std::min<std::uint32_t>(e.x + 1u, width_ - 1);
  const std::uint32_t y0 = e.y > 0 ? e.y - 1u : 0u;
  const std::uint32_t y1 = std::min<std::uint32_t>(e.y + 1u, height_ - 1);
  for (std::uint32_t y = y0; y <= y1; ++y) {
    auto* row = cells_.data() + y * w;
    for (std::uint32_t x = x0; x <= x1; ++x) row[x] = e.t;
  }
  return pass;
}

void NeighborhoodMemory::reset() { std::fill(cells_.begin(), cells_.end(), kNeverWritten); }

RowColumnMemory::RowColumnMemory(const SensorGeometry& geometry) {
  geometry.validate();
  rows_.resize(geometry.height);
  cols_.resize(geometry.width);
}

bool RowColumnMemory::check_and_store(const Event& e, Micros threshold) noexcept {
  auto supports = [&](const Cell& c, std::uint16_t pos) {
    const auto gap = c.position > pos ? c.position - pos : pos - c.position;
    return (c.t != kNeverWritten) & (gap <= 1) & (Micros{e.t} - c.t <= threshold);
  };
  auto& row = rows_[e.y];
  auto& col = cols_[e.x];
  const bool pass = supports(row, e.x) | supports(col, e.y);
  row = {e.t, e.x, e.payload};
  col = {e.t, e.y, e.payload};
  return pass;
}

void RowColumnMemory::reset() {
  std::fill(rows_.begin(), rows_.end(), Cell{});
  std::fill(cols_.begin(), cols_.end(), Cell{});
}

// ---- filters ----------------------------------------------------------------

std::vector<FilterDecision> EventFilter::decide(std::span<const Event> events) {
  std::vector<std::uint8_t> flags(events.size());
  process(events, flags);
  std::vector<FilterDecision> out;
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) out.push_back({events[i], flags[i] != 0});
  return out;
}

GfFilter::GfFilter(const FilterConfig& config, std::size_t frame_size)
    : config_(config), frame_size_(frame_size), memory_(config.geometry, config.s) {
  config_.validate();
  if (frame_size_ == 0) throw ConfigError("frame size must be at least 1");
  reset();
}

std::string GfFilter::name() const { return "gf" + std::to_string(config_.s); }

void GfFilter::reset() {
  memory_.reset();
  threshold_ = {config_.gf_threshold_override.value_or(config_.tgf_init_us), std::nullopt};
  frame_index_ = 0;
  in_frame_ = 0;
}

bool GfFilter::accept(const Event& e) {
  require_inside(config_.geometry, e);
  if (in_frame_ == frame_size_) {
    if (!config_.gf_threshold_override) {
      threshold_ = gf_threshold({in_frame_, Micros{frame_max_t_} - frame_min_t_}, config_, frame_index_);
    }
    ++frame_index_;
    in_frame_ = 0;
  }
  if (in_frame_ == 0) {
    frame_min_t_ = frame_max_t_ = e.t;
  } else {
    frame_min_t_ = std::min(frame_min_t_, e.t);
    frame_max_t_ = std::max(frame_max_t_, e.t);
  }
  ++in_frame_;
  return memory_.check_and_store(e, threshold_.value);
}

void GfFilter::process(std::span<const Event> events, std::span<std::uint8_t> passed) {
  process_all(*this, events, passed);
}

Bs1Filter::Bs1Filter(const FilterConfig& config) : config_(config), memory_(config.geometry) { config_.validate(); }

bool Bs1Filter::accept(const Event& e) {
  require_inside(config_.geometry, e);
  return memory_.check_and_store(e, config_.dt_fixed_us);
}

void Bs1Filter::process(std::span<const Event> events, std::span<std::uint8_t> passed) {
  process_all(*this, events, passed);
}

Bs2Filter::Bs2Filter(const FilterConfig& config) : config_(config), memory_(config.geometry, config.s) {
  config_.validate();
}

std::string Bs2Filter::name() const { return "bs2_" + std::to_string(config_.s); }

bool Bs2Filter::accept(const Event& e) {
  require_inside(config_.geometry, e);
  return memory_.check_and_store(e, config_.dt_fixed_us);
}

void Bs2Filter::process(std::span<const Event> events, std::span<std::uint8_t> passed) {
  process_all(*this, events, passed);
}

Bs3Filter::Bs3Filter(const FilterConfig& config) : config_(config), memory_(config.geometry) { config_.validate(); }

bool Bs3Filter::accept(const Event& e) {
  require_inside(config_.geometry, e);
  return memory_.check_and_store(e, config_.dt_fixed_us);
}

void Bs3Filter::process(std::span<const Event> events, std::span<std::uint8_t> passed) {
  process_all(*this, events, passed);
}

std::unique_ptr<EventFilter> make_filter(FilterKind kind, const FilterConfig& config, std::size_t frame_size) {
  switch (kind) {
    case FilterKind::gf: return std::make_unique<GfFilter>(config, frame_size);
    case FilterKind::bs1: return std::make_unique<Bs1Filter>(config);
    case FilterKind::bs2: return std::make_unique<Bs2Filter>(config);
    case FilterKind::bs3: return std::make_unique<Bs3Filter>(config);
  }
  throw ConfigError("unknown filter kind");
}

// ---- batch entry points -------------------------------------------------------

std::vector<FilterDecision> gf_process(std::span<const Frame> frames, const FilterConfig& config) {
  config.validate();
  SubsampledMemory memory(config.geometry, config.s);
  std::vector<FilterDecision> out;
  GfThreshold threshold{config.gf_threshold_override.value_or(config.tgf_init_us), std::nullopt};
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (k > 0 && !config.gf_threshold_override) {
      threshold = gf_threshold(stats(frames[k - 1]), config, frames[k - 1].index);
    }
    for (const auto& e : frames[k].events) {
      require_inside(config.geometry, e);
      out.push_back({e, memory.check_and_store(e, threshold.value)});
    }
  }
  return out;
}

std::vector<FilterDecision> bs1_process(std::span<const Event> events, const FilterConfig& config) {
  return decide_with(Bs1Filter(config), events);
}

std::vector<FilterDecision> bs2_process(std::span<const Event> events, const FilterConfig& config) {
  return decide_with(Bs2Filter(config), events);
}

std::vector<FilterDecision> bs3_process(std::span<const Event> events, const FilterConfig& config) {
  return decide_with(Bs3Filter(config), events);
}

std::vector<FilterDecision> run_filter(FilterKind kind, const FilterConfig& config, std::span<const Event> events,
                                       std::size_t frame_size) {
  return make_filter(kind, config, frame_size)->decide(events);
}

Classified classify(std::span<const FilterDecision> decisions) {
  Classified out;
  for (const auto& d : decisions) (d.passed ? out.passed : out.discarded).push_back(d.event);
  return out;
}

}  // namespace evd
