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

#include <gtest/gtest.h>

#include <random>

#include "evd/filters.hpp"
#include "evd/framing.hpp"
#include "reference.hpp"

namespace evd {
namespace {

const SensorGeometry kDvs128 = SensorGeometry::dvs128();
const SensorGeometry kGrid32{32, 32, SensorMode::standard};

std::vector<bool> flags(const std::vector<FilterDecision>& d) {
  std::vector<bool> out;
  for (const auto& x : d) out.push_back(x.passed);
  return out;
}

FrameStats fs(std::uint64_t fn, Micros td) { return {fn, td}; }

// ---- defaults ----------------------------------------------------------------

TEST(FilterDefaults, FixedThresholds) {
  EXPECT_EQ(FilterConfig::defaults(FilterKind::bs1, kDvs128).dt_fixed_us, 500u);
  EXPECT_EQ(FilterConfig::defaults(FilterKind::bs2, kDvs128, 1).dt_fixed_us, 500u);
  EXPECT_EQ(FilterConfig::defaults(FilterKind::bs2, kDvs128, 2).dt_fixed_us, 2000u);
  EXPECT_EQ(FilterConfig::defaults(FilterKind::bs2, kDvs128, 3).dt_fixed_us, 4500u);
  EXPECT_EQ(FilterConfig::defaults(FilterKind::bs3, kDvs128).dt_fixed_us, 3u);  // floor(500/128)
  EXPECT_EQ(FilterConfig::defaults(FilterKind::bs3, SensorGeometry::davis240()).dt_fixed_us, 2u);
  EXPECT_EQ(FilterConfig::defaults(FilterKind::bs3, SensorGeometry::celex4()).dt_fixed_us, 1u);  // clamped
}

TEST(FilterDefaults, ScalingFactorByMode) {
  EXPECT_EQ(FilterConfig::defaults(FilterKind::gf, kDvs128).sf, ScalingFactor::of(10));
  EXPECT_EQ(FilterConfig::defaults(FilterKind::gf, SensorGeometry::celex4()).sf, ScalingFactor::of(1, 5));
  EXPECT_EQ(FilterConfig::defaults(FilterKind::gf, kDvs128).tgf_init_us, 1000u);
}

TEST(ScalingFactorParse, DecimalAndFraction) {
  EXPECT_EQ(ScalingFactor::parse("10"), ScalingFactor::of(10));
  EXPECT_EQ(ScalingFactor::parse("0.2"), ScalingFactor::of(1, 5));
  EXPECT_EQ(ScalingFactor::parse("2.50"), ScalingFactor::of(5, 2));
  EXPECT_EQ(ScalingFactor::parse(".5"), ScalingFactor::of(1, 2));
  EXPECT_EQ(ScalingFactor::parse("3/9"), ScalingFactor::of(1, 3));
  for (const char* bad : {"", "0", "0.0", "-1", "abc", "1/0", "1.2.3", "1e3"}) {
    EXPECT_THROW(ScalingFactor::parse(bad), ConfigError) << bad;
  }
}

TEST(FilterConfig, RejectsZeroSubsampling) {
  auto c = FilterConfig::defaults(FilterKind::gf, kDvs128);
  c.s = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(GfFilter(c, 10), ConfigError);
}

// ---- threshold ---------------------------------------------------------------

TEST(GfThreshold, WorkedStandardExample) {
  auto c = FilterConfig::defaults(FilterKind::gf, kDvs128, 2);
  EXPECT_EQ(gf_threshold(fs(5000, 50000), c).value, 4096u);
}

TEST(GfThreshold, DegenerateFrameClampsToOne) {
  auto c = FilterConfig::defaults(FilterKind::gf, kDvs128, 2);
  EXPECT_EQ(gf_threshold(fs(5000, 0), c).value, 1u);
}

TEST(GfThreshold, CelexExample) {
  // 1000 * 768 * (768 * 640) / (1 * 50000 * 0.2)
  auto c = FilterConfig::defaults(FilterKind::gf, SensorGeometry::celex4(), 1);
  EXPECT_EQ(gf_threshold(fs(50000, 1000), c).value, 37'748'736u);
}

TEST(GfThreshold, EmptyFrameRejected) {
  auto c = FilterConfig::defaults(FilterKind::gf, kDvs128);
  EXPECT_THROW(gf_threshold(fs(0, 10), c), EmptyFrameError);
}

TEST(GfThreshold, CarriesFrameIndex) {
  auto c = FilterConfig::defaults(FilterKind::gf, kDvs128);
  EXPECT_EQ(gf_threshold(fs(10, 10), c, 4).frame_index, std::optional<std::size_t>(4));
}

TEST(GfThreshold, ScalingProperties) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint64_t> fn_d(1, 100000), td_d(0, 5'000'000), sf_d(1, 1000);
  for (int trial = 0; trial < 500; ++trial) {
    const auto st = fs(fn_d(rng), td_d(rng));
    auto base = FilterConfig::defaults(FilterKind::gf, kDvs128, 1);
    base.sf = ScalingFactor::of(sf_d(rng), sf_d(rng));
    const auto r1 = gf_threshold_exact(st, base);

    // value(SF) * SF is constant: compare against SF = 1.
    auto unit = base;
    unit.sf = ScalingFactor::of(1);
    const auto ru = gf_threshold_exact(st, unit);
    EXPECT_TRUE(r1.num * base.sf.num * ru.den == ru.num * r1.den * base.sf.den);

    // value(s) * s^2 is constant.
    for (std::uint32_t s : {2u, 4u}) {
      auto sub = base;
      sub.s = s;
      const auto rs = gf_threshold_exact(st, sub);
      EXPECT_TRUE(rs.num * s * s * r1.den == r1.num * rs.den);
    }

    // Larger SF never raises the floored value.
    auto bigger = base;
    bigger.sf = ScalingFactor::of(base.sf.num * 2, base.sf.den);
    EXPECT_LE(gf_threshold(st, bigger).value, gf_threshold(st, base).value);
  }
}

// ---- memories ----------------------------------------------------------------

TEST(Memory, CellCounts) {
  EXPECT_EQ(NeighborhoodMemory(kDvs128).cell_count(), 128u * 128u);
  EXPECT_EQ(SubsampledMemory(kDvs128, 1).cell_count(), 128u * 128u);
  EXPECT_EQ(SubsampledMemory(kDvs128, 2).cell_count(), 64u * 64u);
  EXPECT_EQ(SubsampledMemory(SensorGeometry::davis240(), 7).cell_count(), 35u * 26u);  // ceil(240/7)*ceil(180/7)
  EXPECT_EQ(RowColumnMemory(SensorGeometry::davis240()).cell_count(), 2u * (180u + 240u));
}

TEST(Memory, FreshCellsAreNeverWritten) {
  SubsampledMemory m(kGrid32, 3);
  for (std::uint16_t y = 0; y < 32; ++y)
    for (std::uint16_t x = 0; x < 32; ++x) ASSERT_EQ(m.cell(x, y), kNeverWritten);
}

TEST(Bs1, NeighborWriteProperty) {
  std::mt19937_64 rng(23);
  const SensorGeometry g{12, 9, SensorMode::standard};
  const auto events = reference::random_stream(rng, 400, 12, 9);
  Bs1Filter f(FilterConfig::defaults(FilterKind::bs1, g));
  for (const auto& e : events) {
    f.accept(e);
    for (std::uint16_t y = 0; y < 9; ++y) {
      for (std::uint16_t x = 0; x < 12; ++x) {
        const bool near = reference::absdiff(x, e.x) <= 1 && reference::absdiff(y, e.y) <= 1;
        if (near) {
          ASSERT_EQ(f.memory().cell(x, y), e.t);
        } else {
          // Anything outside the block is older or equal (sorted stream).
          ASSERT_TRUE(f.memory().cell(x, y) == kNeverWritten || f.memory().cell(x, y) <= e.t);
        }
      }
    }
  }
}

// ---- per-filter hand traces ----------------------------------------------------

TEST(Bs1, IsolatedEventDiscarded) {
  EXPECT_EQ(flags(bs1_process(std::vector<Event>{{0, 5, 5, 1}}, FilterConfig::defaults(FilterKind::bs1, kDvs128))),
            std::vector<bool>{false});
}

TEST(Bs1, NeighborSupportWithinWindow) {
  const auto c = FilterConfig::defaults(FilterKind::bs1, kDvs128);
  EXPECT_EQ(flags(bs1_process(std::vector<Event>{{0, 5, 5, 1}, {400, 6, 6, 1}}, c)), (std::vector<bool>{false, true}));
  EXPECT_EQ(flags(bs1_process(std::vector<Event>{{0, 5, 5, 1}, {600, 6, 6, 1}}, c)), (std::vector<bool>{false, false}));
  EXPECT_EQ(flags(bs1_process(std::vector<Event>{{0, 5, 5, 1}, {400, 7, 7, 1}}, c)), (std::vector<bool>{false, false}));
}

TEST(Bs1, BorderEventsClampNeighborhood) {
  const auto c = FilterConfig::defaults(FilterKind::bs1, kDvs128);
  EXPECT_EQ(flags(bs1_process(std::vector<Event>{{0, 0, 0, 1}, {10, 1, 1, 1}, {20, 127, 127, 0}, {30, 126, 127, 0}}, c)),
            (std::vector<bool>{false, true, false, true}));
}

TEST(Bs2, SubsamplingOneIsPerPixel) {
  const auto c = FilterConfig::defaults(FilterKind::bs2, kDvs128, 1);
  EXPECT_EQ(c.dt_fixed_us, 500u);
  EXPECT_EQ(flags(bs2_process(std::vector<Event>{{0, 5, 5, 1}, {100, 6, 5, 1}, {500, 5, 5, 1}}, c)),
            (std::vector<bool>{false, false, true}));
}

TEST(Bs2, SameGroupPasses) {
  const auto c = FilterConfig::defaults(FilterKind::bs2, kDvs128, 2);
  ASSERT_EQ(c.dt_fixed_us, 2000u);
  EXPECT_EQ(flags(bs2_process(std::vector<Event>{{0, 0, 0, 1}, {1500, 1, 1, 1}}, c)), (std::vector<bool>{false, true}));
  EXPECT_EQ(flags(bs2_process(std::vector<Event>{{0, 0, 0, 1}, {100, 2, 2, 1}}, c)), (std::vector<bool>{false, false}));
}

TEST(Bs3, FirstEventDiscardedRowNeighborPasses) {
  const auto c = FilterConfig::defaults(FilterKind::bs3, kDvs128);
  ASSERT_EQ(c.dt_fixed_us, 3u);
  EXPECT_EQ(flags(bs3_process(std::vector<Event>{{0, 10, 5, 1}, {1, 11, 5, 1}}, c)), (std::vector<bool>{false, true}));
  EXPECT_EQ(flags(bs3_process(std::vector<Event>{{0, 10, 5, 1}, {4, 11, 5, 1}}, c)), (std::vector<bool>{false, false}));
  EXPECT_EQ(flags(bs3_process(std::vector<Event>{{0, 10, 5, 1}, {1, 12, 5, 1}}, c)), (std::vector<bool>{false, false}));
}

TEST(Bs3, ColumnSupportAlonePasses) {
  const auto c = FilterConfig::defaults(FilterKind::bs3, kDvs128);
  EXPECT_EQ(flags(bs3_process(std::vector<Event>{{0, 10, 5, 1}, {2, 10, 6, 1}}, c)), (std::vector<bool>{false, true}));
}

TEST(Bs3, CelexSharedTimestampRowPassesAfterFirst) {
  auto g = kDvs128;
  g.mode = SensorMode::celex_row_timestamp;
  const auto c = FilterConfig::defaults(FilterKind::bs3, g);
  std::vector<Event> row;
  for (std::uint16_t x = 20; x < 40; ++x) row.push_back({777, x, 9, kCelexIntensity});
  const auto d = flags(bs3_process(row, c));
  EXPECT_FALSE(d.front());
  for (std::size_t i = 1; i < d.size(); ++i) EXPECT_TRUE(d[i]) << i;
}

TEST(Gf, FirstEventDiscardedAndBoundaryInclusive) {
  auto c = FilterConfig::defaults(FilterKind::gf, kDvs128, 1);
  c.tgf_init_us = 250;
  const std::vector<Event> ev{{0, 3, 3, 1}, {250, 3, 3, 1}, {501, 3, 3, 1}};
  const auto frames = accumulate(ev, 5000);
  EXPECT_EQ(flags(gf_process(frames, c)), (std::vector<bool>{false, true, false}));
}

TEST(Gf, ThresholdSwitchesOnFrameBoundaries) {
  // 4x4 sensor, s=1, SF=1: threshold = TD * 16 / FN.
  const SensorGeometry g{4, 4, SensorMode::standard};
  auto c = FilterConfig::defaults(FilterKind::gf, g, 1);
  c.sf = ScalingFactor::of(1);
  c.tgf_init_us = 5;
  // Frame 0: TD = 30 over 4 events -> next threshold 120.
  const std::vector<Event> ev{{0, 0, 0, 0}, {10, 1, 0, 0}, {20, 2, 0, 0}, {30, 3, 0, 0},
                              {100, 0, 0, 0}, {210, 0, 0, 0}, {340, 0, 0, 0}, {345, 3, 3, 0}};
  const auto frames = accumulate(ev, 4);
  EXPECT_EQ(flags(gf_process(frames, c)), (std::vector<bool>{false, false, false, false, true, true, false, false}));

  GfFilter streaming(c, 4);
  std::vector<bool> seen;
  for (const auto& e : ev) seen.push_back(streaming.accept(e));
  EXPECT_EQ(seen, flags(gf_process(frames, c)));
  EXPECT_EQ(streaming.threshold().value, 120u);
  EXPECT_EQ(streaming.threshold().frame_index, std::optional<std::size_t>(0));
}

TEST(Gf, MemoryPersistsAcrossFrames) {
  auto c = FilterConfig::defaults(FilterKind::gf, kDvs128, 1);
  c.gf_threshold_override = 100;
  const std::vector<Event> ev{{0, 1, 1, 0}, {50, 1, 1, 0}};
  const auto frames = accumulate(ev, 1);
  EXPECT_EQ(flags(gf_process(frames, c)), (std::vector<bool>{false, true}));
}

TEST(Filters, GeometryErrorOnOutOfBoundsEvent) {
  const std::vector<Event> bad{{0, 200, 1, 0}};
  for (auto kind : {FilterKind::gf, FilterKind::bs1, FilterKind::bs2, FilterKind::bs3}) {
    EXPECT_THROW(run_filter(kind, FilterConfig::defaults(kind, kDvs128, 2), bad, 10), GeometryError);
  }
  EXPECT_THROW(gf_process(accumulate(bad, 1), FilterConfig::defaults(FilterKind::gf, kDvs128)), GeometryError);
}

// ---- properties ------------------------------------------------------------------

TEST(Filters, GfWithConstantThresholdEqualsBs2) {
  std::mt19937_64 rng(31);
  for (std::uint32_t s : {1u, 2u, 3u, 4u}) {
    const auto ev = reference::random_stream(rng, 5000, 32, 32);
    const auto bs2 = FilterConfig::defaults(FilterKind::bs2, kGrid32, s);
    auto gf = FilterConfig::defaults(FilterKind::gf, kGrid32, s);
    gf.gf_threshold_override = bs2.dt_fixed_us;
    EXPECT_EQ(flags(gf_process(accumulate(ev, 777), gf)), flags(bs2_process(ev, bs2))) << "s=" << s;
  }
}

TEST(Filters, StreamingGfMatchesFrameDriver) {
  std::mt19937_64 rng(37);
  for (std::size_t frame_size : {1u, 50u, 999u}) {
    const auto ev = reference::random_stream(rng, 4000, 32, 32);
    const auto c = FilterConfig::defaults(FilterKind::gf, kGrid32, 2);
    EXPECT_EQ(flags(run_filter(FilterKind::gf, c, ev, frame_size)), flags(gf_process(accumulate(ev, frame_size), c)));
  }
}

TEST(Filters, MatchNaiveReferences) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ev = reference::random_stream(rng, 10000, 32, 32);
    const auto g = FilterConfig::defaults(FilterKind::gf, kGrid32, 2);
    EXPECT_EQ(flags(run_filter(FilterKind::gf, g, ev, 500)), reference::gf(ev, g, 500));
    const auto b1 = FilterConfig::defaults(FilterKind::bs1, kGrid32);
    EXPECT_EQ(flags(bs1_process(ev, b1)), reference::bs1(ev, b1));
    const auto b2 = FilterConfig::defaults(FilterKind::bs2, kGrid32, 2);
    EXPECT_EQ(flags(bs2_process(ev, b2)), reference::bs2(ev, b2));
    auto b3 = FilterConfig::defaults(FilterKind::bs3, kGrid32);
    b3.dt_fixed_us = 50;
    EXPECT_EQ(flags(bs3_process(ev, b3)), reference::bs3(ev, b3));
  }
}

TEST(Filters, DeterministicAndConservative) {
  std::mt19937_64 rng(43);
  const auto ev = reference::random_stream(rng, 3000, 32, 32);
  for (auto kind : {FilterKind::gf, FilterKind::bs1, FilterKind::bs2, FilterKind::bs3}) {
    const auto c = FilterConfig::defaults(kind, kGrid32, 2);
    const auto a = run_filter(kind, c, ev, 300);
    EXPECT_EQ(a, run_filter(kind, c, ev, 300));
    const auto parts = classify(a);
    EXPECT_EQ(parts.passed.size() + parts.discarded.size(), ev.size());
  }
}

TEST(Filters, ResetRestoresFreshState) {
  std::mt19937_64 rng(47);
  const auto ev = reference::random_stream(rng, 2000, 32, 32);
  for (auto kind : {FilterKind::gf, FilterKind::bs1, FilterKind::bs2, FilterKind::bs3}) {
    auto f = make_filter(kind, FilterConfig::defaults(kind, kGrid32, 2), 100);
    const auto first = f->decide(ev);
    f->reset();
    EXPECT_EQ(f->decide(ev), first) << to_string(kind);
  }
}

TEST(Classify, Partitions) {
  const std::vector<FilterDecision> all_pass{{{1, 1, 1, 0}, true}, {{2, 1, 1, 0}, true}};
  EXPECT_TRUE(classify(all_pass).discarded.empty());
  const std::vector<FilterDecision> none{{{1, 1, 1, 0}, false}};
  EXPECT_TRUE(classify(none).passed.empty());

  std::mt19937_64 rng(53);
  std::bernoulli_distribution coin(0.3);
  std::vector<FilterDecision> mixed;
  std::size_t expected_pass = 0;
  for (std::uint32_t i = 0; i < 10000; ++i) {
    const bool p = coin(rng);
    expected_pass += p;
    mixed.push_back({{i, 0, 0, 0}, p});
  }
  const auto parts = classify(mixed);
  EXPECT_EQ(parts.passed.size(), expected_pass);
  EXPECT_EQ(parts.discarded.size(), 10000 - expected_pass);
  EXPECT_TRUE(std::is_sorted(parts.passed.begin(), parts.passed.end(), [](auto& a, auto& b) { return a.t < b.t; }));
}

TEST(FilterKindNames, RoundTrip) {
  for (auto kind : {FilterKind::gf, FilterKind::bs1, FilterKind::bs2, FilterKind::bs3}) {
    EXPECT_EQ(parse_filter_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_filter_kind("median"), ConfigError);
}

}  // namespace
}  // namespace evd
