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

// Naive reference filters for equivalence testing. None of them keeps a
// memory array: for each event they scan backwards through the stream to
// find the event that would last have written the cell being read.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "evd/event.hpp"
#include "evd/filters.hpp"

namespace evd::reference {

__extension__ using U128 = unsigned __int128;

inline bool within(std::uint32_t newer, std::uint32_t older, std::uint64_t threshold) {
  return static_cast<std::uint64_t>(newer) - older <= threshold;
}

inline std::uint32_t absdiff(std::uint32_t a, std::uint32_t b) { return a > b ? a - b : b - a; }

/// Most recent j < i satisfying `writes(events[j])`.
template <typename Pred>
std::optional<std::size_t> last_writer(const std::vector<Event>& events, std::size_t i, Pred writes) {
  for (std::size_t j = i; j-- > 0;) {
    if (writes(events[j])) return j;
  }
  return std::nullopt;
}

// Threshold derived straight from the frame's raw events.
inline std::uint64_t naive_gf_threshold(const std::vector<Event>& events, std::size_t begin, std::size_t end,
                                        const FilterConfig& c) {
  std::uint32_t lo = events[begin].t, hi = events[begin].t;
  for (std::size_t k = begin; k < end; ++k) {
    lo = std::min(lo, events[k].t);
    hi = std::max(hi, events[k].t);
  }
  const U128 td = hi - lo;
  const U128 fn = end - begin;
  U128 num = td * c.geometry.width * c.geometry.height * c.sf.den;
  if (c.geometry.mode == SensorMode::celex_row_timestamp) num *= c.geometry.width;
  const U128 den = U128{c.s} * c.s * fn * c.sf.num;
  const U128 q = num / den;
  return q == 0 ? 1 : static_cast<std::uint64_t>(q);
}

inline std::vector<bool> gf(const std::vector<Event>& events, const FilterConfig& c, std::size_t frame_size) {
  std::vector<bool> out(events.size());
  std::uint64_t threshold = c.tgf_init_us;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0 && i % frame_size == 0) threshold = naive_gf_threshold(events, i - frame_size, i, c);
    if (c.gf_threshold_override) threshold = *c.gf_threshold_override;
    const auto& e = events[i];
    const auto w = last_writer(events, i, [&](const Event& p) { return p.x / c.s == e.x / c.s && p.y / c.s == e.y / c.s; });
    out[i] = w && within(e.t, events[*w].t, threshold);
  }
  return out;
}

inline std::vector<bool> bs1(const std::vector<Event>& events, const FilterConfig& c) {
  std::vector<bool> out(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    // Every event writes its 3x3 block, so the own cell was last written by
    // the latest event within Chebyshev distance 1.
    const auto w = last_writer(events, i, [&](const Event& p) { return absdiff(p.x, e.x) <= 1 && absdiff(p.y, e.y) <= 1; });
    out[i] = w && within(e.t, events[*w].t, c.dt_fixed_us);
  }
  return out;
}

inline std::vector<bool> bs2(const std::vector<Event>& events, const FilterConfig& c) {
  std::vector<bool> out(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const auto w = last_writer(events, i, [&](const Event& p) { return p.x / c.s == e.x / c.s && p.y / c.s == e.y / c.s; });
    out[i] = w && within(e.t, events[*w].t, c.dt_fixed_us);
  }
  return out;
}

inline std::vector<bool> bs3(const std::vector<Event>& events, const FilterConfig& c) {
  std::vector<bool> out(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const auto row = last_writer(events, i, [&](const Event& p) { return p.y == e.y; });
    const auto col = last_writer(events, i, [&](const Event& p) { return p.x == e.x; });
    const bool row_ok = row && absdiff(events[*row].x, e.x) <= 1 && within(e.t, events[*row].t, c.dt_fixed_us);
    const bool col_ok = col && absdiff(events[*col].y, e.y) <= 1 && within(e.t, events[*col].t, c.dt_fixed_us);
    out[i] = row_ok || col_ok;
  }
  return out;
}

/// Random sorted stream with bursts of spatially clustered events, plain
/// uniform noise, and timestamp ties.
inline std::vector<Event> random_stream(std::mt19937_64& rng, std::size_t count, std::uint32_t width,
                                        std::uint32_t height) {
  std::vector<Event> out;
  out.reserve(count);
  std::uniform_int_distribution<std::uint32_t> xs(0, width - 1), ys(0, height - 1), gap(0, 400), coin(0, 9);
  std::uniform_int_distribution<int> step(-1, 1);
  std::uint32_t t = 0, cx = xs(rng), cy = ys(rng);
  while (out.size() < count) {
    const auto roll = coin(rng);
    if (roll < 2) {
      // tie
    } else if (roll < 5) {
      t += gap(rng) / 8;
    } else {
      t += gap(rng);
    }
    std::uint32_t x, y;
    if (coin(rng) < 6) {
      cx = static_cast<std::uint32_t>(std::clamp<int>(static_cast<int>(cx) + step(rng), 0, static_cast<int>(width) - 1));
      cy = static_cast<std::uint32_t>(std::clamp<int>(static_cast<int>(cy) + step(rng), 0, static_cast<int>(height) - 1));
      x = cx;
      y = cy;
    } else {
      x = xs(rng);
      y = ys(rng);
    }
    out.push_back({t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                   static_cast<std::uint8_t>(coin(rng) & 1)});
  }
  return out;
}

}  // namespace evd::reference
