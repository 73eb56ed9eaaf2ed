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

#include "evd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace evd {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
  double lo = kInf;
  double hi = -kInf;
  bool contains(double t) const noexcept { return lo <= t && t <= hi; }
};

Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

// Times t at which |p - (c + v (t - t0))| <= h along one axis.
Interval axis_interval(double p, double c, double v, double h, double t0) {
  const double d = p - c;
  if (v == 0.0) return std::abs(d) <= h ? Interval{-kInf, kInf} : Interval{};
  double a = (d - h) / v;
  double b = (d + h) / v;
  if (a > b) std::swap(a, b);
  return {t0 + a, t0 + b};
}

// Times at which the pixel centre (px, py) lies inside the object, for an
// object at `centre` at time t0 moving with velocity v (pixels/us).
Interval inside_interval(const Trajectory& obj, double px, double py, double cx, double cy, double vx,
                         double vy, double t0) {
  if (obj.shape == ShapeKind::rectangle) {
    return intersect(axis_interval(px, cx, vx, obj.half_width, t0),
                     axis_interval(py, cy, vy, obj.half_height, t0));
  }
  const double dx = px - cx;
  const double dy = py - cy;
  const double r2 = obj.radius * obj.radius;
  const double a = vx * vx + vy * vy;
  const double c = dx * dx + dy * dy - r2;
  if (a == 0.0) return c <= 0.0 ? Interval{-kInf, kInf} : Interval{};
  const double b = -2.0 * (dx * vx + dy * vy);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double root = std::sqrt(disc);
  return {t0 + (-b - root) / (2.0 * a), t0 + (-b + root) / (2.0 * a)};
}

void validate(const SyntheticConfig& cfg) {
  cfg.geometry.validate();
  const auto& o = cfg.object;
  if (o.shape == ShapeKind::disc && !(o.radius > 0.0)) throw ConfigError("disc radius must be positive");
  if (o.shape == ShapeKind::rectangle && !(o.half_width > 0.0 && o.half_height > 0.0)) {
    throw ConfigError("rectangle must have positive width and height");
  }
  for (double v : {o.radius, o.half_width, o.half_height, o.start_x, o.start_y, o.velocity_x, o.velocity_y}) {
    if (!std::isfinite(v)) throw ConfigError("object parameters must be finite");
  }
  if (!(cfg.ba_rate_hz >= 0.0) || !std::isfinite(cfg.ba_rate_hz)) throw ConfigError("ba_rate must be >= 0");
  if (cfg.duration_us > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("duration exceeds 32-bit microsecond timestamps");
  }
  if (cfg.geometry.mode == SensorMode::celex_row_timestamp && cfg.celex_readout_us == 0) {
    throw ConfigError("celex readout window must be at least 1 us");
  }
}

std::vector<LabeledEvent> real_events(const SyntheticConfig& cfg) {
  const auto& obj = cfg.object;
  const auto width = cfg.geometry.width;
  const auto height = cfg.geometry.height;
  const double duration = static_cast<double>(cfg.duration_us);
  const double ex = obj.shape == ShapeKind::disc ? obj.radius : obj.half_width;
  const double ey = obj.shape == ShapeKind::disc ? obj.radius : obj.half_height;
  const bool fits_x = 2.0 * ex <= width;
  const bool fits_y = 2.0 * ey <= height;

  std::vector<std::uint8_t> inside(cfg.geometry.pixel_count(), 0);
  std::vector<LabeledEvent> out;

  auto emit = [&](double when, std::uint32_t x, std::uint32_t y, bool entering) {
    const auto t = static_cast<std::uint32_t>(std::floor(when));
    out.push_back({Event{t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                         entering ? kPolarityOn : kPolarityOff},
                   Label::real});
  };

  double cx = obj.start_x;
  double cy = obj.start_y;
  double vx = obj.velocity_x / 1000.0;
  double vy = obj.velocity_y / 1000.0;

  // Initial occupancy emits nothing: the scene is static before t = 0.
  for (std::uint32_t y = 0; y < height; ++y) {
    for (std::uint32_t x = 0; x < width; ++x) {
      inside[y * std::size_t{width} + x] =
          inside_interval(obj, x + 0.5, y + 0.5, cx, cy, 0.0, 0.0, 0.0).contains(0.0);
    }
  }

  double t0 = 0.0;
  while (t0 < duration) {
    double dt = duration - t0;
    bool hit_x = false, hit_y = false;
    if (obj.bounce) {
      auto wall_time = [](double c, double v, double e, double size) {
        if (v > 0.0) return std::max(0.0, (size - e - c) / v);
        if (v < 0.0) return std::max(0.0, (e - c) / v);
        return kInf;
      };
      const double tx = fits_x ? wall_time(cx, vx, ex, width) : kInf;
      const double ty = fits_y ? wall_time(cy, vy, ey, height) : kInf;
      if (tx <= dt || ty <= dt) {
        dt = std::min(tx, ty);
        hit_x = tx == dt;
        hit_y = ty == dt;
      }
    }
    const double t1 = t0 + dt;
    const double cx1 = cx + vx * dt;
    const double cy1 = cy + vy * dt;

    // Pixels whose centres the object can touch during this segment.
    const auto lo_x = static_cast<long>(std::floor(std::min(cx, cx1) - ex)) - 1;
    const auto hi_x = static_cast<long>(std::ceil(std::max(cx, cx1) + ex)) + 1;
    const auto lo_y = static_cast<long>(std::floor(std::min(cy, cy1) - ey)) - 1;
    const auto hi_y = static_cast<long>(std::ceil(std::max(cy, cy1) + ey)) + 1;
    const auto x_begin = static_cast<std::uint32_t>(std::clamp<long>(lo_x, 0, width));
    const auto x_end = static_cast<std::uint32_t>(std::clamp<long>(hi_x + 1, 0, width));
    const auto y_begin = static_cast<std::uint32_t>(std::clamp<long>(lo_y, 0, height));
    const auto y_end = static_cast<std::uint32_t>(std::clamp<long>(hi_y + 1, 0, height));

    if (vx != 0.0 || vy != 0.0) {
      for (std::uint32_t y = y_begin; y < y_end; ++y) {
        for (std::uint32_t x = x_begin; x < x_end; ++x) {
          auto& state = inside[y * std::size_t{width} + x];
          const auto span = inside_interval(obj, x + 0.5, y + 0.5, cx, cy, vx, vy, t0);
          // Settle any disagreement left by rounding at the previous segment end.
          const bool now = span.contains(t0);
          if (state != now) {
            emit(t0, x, y, now);
            state = now;
          }
          if (!state && span.lo > t0 && span.lo < t1) {
            emit(span.lo, x, y, true);
            state = 1;
          }
          if (state && span.hi > t0 && span.hi < t1) {
            emit(span.hi, x, y, false);
            state = 0;
          }
        }
      }
    }

    t0 = t1;
    cx = cx1;
    cy = cy1;
    if (hit_x) vx = -vx;
    if (hit_y) vy = -vy;
  }
  return out;
}

std::vector<LabeledEvent> ba_events(const SyntheticConfig& cfg, std::mt19937_64& rng) {
  std::vector<LabeledEvent> out;
  if (cfg.ba_rate_hz == 0.0) return out;
  std::exponential_distribution<double> gap(cfg.ba_rate_hz / 1e6);
  std::bernoulli_distribution polarity(0.5);
  const double duration = static_cast<double>(cfg.duration_us);
  for (std::uint32_t y = 0; y < cfg.geometry.height; ++y) {
    for (std::uint32_t x = 0; x < cfg.geometry.width; ++x) {
      for (double t = gap(rng); t < duration; t += gap(rng)) {
        out.push_back({Event{static_cast<std::uint32_t>(t), static_cast<std::uint16_t>(x),
                             static_cast<std::uint16_t>(y), polarity(rng) ? kPolarityOn : kPolarityOff},
                       Label::ba});
      }
    }
  }
  return out;
}

bool by_time_then_address(const LabeledEvent& a, const LabeledEvent& b) {
  if (a.event.t != b.event.t) return a.event.t < b.event.t;
  if (a.event.y != b.event.y) return a.event.y < b.event.y;
  return a.event.x < b.event.x;
}

// Regroups a time-sorted stream into CeleX row runs: within each readout
// window the rows that fired are read out in random order, each row
// left to right, all events of one run stamped with a single timestamp.
std::vector<LabeledEvent> regroup_celex(std::vector<LabeledEvent> events, Micros window,
                                        std::mt19937_64& rng) {
  std::vector<LabeledEvent> out;
  out.reserve(events.size());
  std::uint64_t last_ts = 0;
  bool any = false;

  std::size_t begin = 0;
  while (begin < events.size()) {
    const auto slot = events[begin].event.t / window;
    std::size_t end = begin;
    while (end < events.size() && events[end].event.t / window == slot) ++end;

    auto first = events.begin() + static_cast<std::ptrdiff_t>(begin);
    auto last = events.begin() + static_cast<std::ptrdiff_t>(end);
    std::stable_sort(first, last, [](const LabeledEvent& a, const LabeledEvent& b) {
      if (a.event.y != b.event.y) return a.event.y < b.event.y;
      return a.event.x < b.event.x;
    });

    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = begin; i < end;) {
      std::size_t j = i;
      while (j < end && events[j].event.y == events[i].event.y) ++j;
      runs.emplace_back(i, j);
      i = j;
    }
    std::shuffle(runs.begin(), runs.end(), rng);

    for (const auto& [i, j] : runs) {
      std::uint64_t ts = 0;
      for (std::size_t k = i; k < j; ++k) ts = std::max<std::uint64_t>(ts, events[k].event.t);
      if (any) ts = std::max(ts, last_ts + 1);
      if (ts > std::numeric_limits<std::uint32_t>::max()) {
        throw ConfigError("celex regrouping overflowed 32-bit timestamps");
      }
      for (std::size_t k = i; k < j; ++k) {
        auto le = events[k];
        le.event.t = static_cast<std::uint32_t>(ts);
        le.event.payload = kCelexIntensity;
        out.push_back(le);
      }
      last_ts = ts;
      any = true;
    }
    begin = end;
  }
  return out;
}

}  // namespace

std::vector<LabeledEvent> generate_synthetic(const SyntheticConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.seed);

  auto real = real_events(config);
  auto noise = ba_events(config, rng);
  std::stable_sort(real.begin(), real.end(), by_time_then_address);
  std::stable_sort(noise.begin(), noise.end(), by_time_then_address);

  std::vector<LabeledEvent> merged;
  merged.reserve(real.size() + noise.size());
  // std::merge takes from the first range on ties, so Real precedes BA.
  std::merge(real.begin(), real.end(), noise.begin(), noise.end(), std::back_inserter(merged),
             [](const LabeledEvent& a, const LabeledEvent& b) { return a.event.t < b.event.t; });

  if (config.geometry.mode == SensorMode::celex_row_timestamp) {
    std::mt19937_64 readout_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    return regroup_celex(std::move(merged), config.celex_readout_us, readout_rng);
  }
  return merged;
}

std::vector<LabeledEvent> generate_event_count(SyntheticConfig config, std::size_t count) {
  if (config.duration_us == 0) config.duration_us = 1'000'000;
  while (true) {
    auto events = generate_synthetic(config);
    if (events.size() >= count) {
      events.resize(count);
      return events;
    }
    if (config.duration_us > std::numeric_limits<std::uint32_t>::max() / 2) {
      throw ConfigError("cannot reach the requested event count within 32-bit timestamps");
    }
    config.duration_us *= 2;
  }
}

}  // namespace evd
