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

#include "evd/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace evd {

std::string FilterSpec::name() const {
  switch (kind) {
    case FilterKind::gf: return "gf" + std::to_string(config.s);
    case FilterKind::bs2: return "bs2_" + std::to_string(config.s);
    default: return std::string(to_string(kind));
  }
}

std::vector<LabeledEvent> label_with_reference(std::span<const Event> events, const FilterSpec& reference,
                                               std::size_t frame_size) {
  const auto decisions = run_filter(reference.kind, reference.config, events, frame_size);
  std::vector<LabeledEvent> out;
  out.reserve(decisions.size());
  for (const auto& d : decisions) out.push_back({d.event, d.passed ? Label::real : Label::ba});
  return out;
}

std::vector<FrameConfusion> confusion(std::span<const LabeledEvent> labeled,
                                      std::span<const FilterDecision> decisions, std::size_t frame_size) {
  if (frame_size == 0) throw ConfigError("frame size must be at least 1");
  if (labeled.size() != decisions.size()) {
    throw AlignmentError("labels cover " + std::to_string(labeled.size()) + " events but decisions cover " +
                         std::to_string(decisions.size()));
  }
  std::vector<FrameConfusion> out;
  for (std::size_t begin = 0; begin < labeled.size(); begin += frame_size) {
    const auto end = std::min(labeled.size(), begin + frame_size);
    FrameConfusion fc;
    fc.frame_index = out.size();
    fc.partial = end - begin < frame_size;
    for (std::size_t i = begin; i < end; ++i) {
      if (!(labeled[i].event == decisions[i].event)) {
        throw AlignmentError("event " + std::to_string(i) + " differs between labels and decisions");
      }
      const bool real = labeled[i].label == Label::real;
      const bool passed = decisions[i].passed;
      if (real) {
        ++(passed ? fc.tp : fc.fn);
      } else {
        ++(passed ? fc.fp : fc.tn);
      }
    }
    if (fc.tp + fc.fn > 0) fc.tpr = static_cast<double>(fc.tp) / static_cast<double>(fc.tp + fc.fn);
    if (fc.fp + fc.tn > 0) fc.fpr = static_cast<double>(fc.fp) / static_cast<double>(fc.fp + fc.tn);
    out.push_back(fc);
  }
  return out;
}

ConfusionSummary summarize(std::span<const FrameConfusion> frames) {
  ConfusionSummary s;
  double tpr_sum = 0, fpr_sum = 0;
  std::size_t tpr_n = 0, fpr_n = 0;
  for (const auto& f : frames) {
    if (f.partial) continue;
    ++s.frames;
    if (f.tpr) tpr_sum += *f.tpr, ++tpr_n;
    if (f.fpr) fpr_sum += *f.fpr, ++fpr_n;
  }
  if (tpr_n) s.mean_tpr = tpr_sum / static_cast<double>(tpr_n);
  if (fpr_n) s.mean_fpr = fpr_sum / static_cast<double>(fpr_n);
  return s;
}

double BenchReport::events_per_second() const noexcept {
  if (wall.count() <= 0) return 0.0;
  return static_cast<double>(events) * 1e9 / static_cast<double>(wall.count());
}

BenchReport bench(const FilterSpec& filter, std::span<const Event> events, std::size_t frame_size,
                  std::size_t repetitions) {
  if (events.empty()) throw ConfigError("cannot benchmark an empty stream");
  if (repetitions == 0) throw ConfigError("repetitions must be at least 1");

  std::vector<std::uint8_t> flags(events.size());
  auto best = std::chrono::nanoseconds::max();
  std::uint64_t sink = 0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    auto f = make_filter(filter.kind, filter.config, frame_size);
    const auto start = std::chrono::steady_clock::now();
    f->process(events, flags);
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start));
    sink += flags[r % flags.size()];
  }
  // Keep the decision buffer observable.
  asm volatile("" : : "r"(sink) : "memory");
  return {filter.name(), events.size(), frame_size, best, repetitions};
}

namespace {

std::string fixed(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) return out;
    line.remove_prefix(comma + 1);
  }
}

template <typename T>
T to_number(std::string_view s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad numeric field '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> optional_ratio(std::string_view s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return to_number<double>(s, line);
}

}  // namespace

void write_confusion_csv(std::ostream& out, std::span<const FrameConfusion> rows) {
  out << kConfusionCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.frame_index << ',' << r.tp << ',' << r.fp << ',' << r.tn << ',' << r.fn << ','
        << (r.tpr ? fixed(*r.tpr, 6) : "") << ',' << (r.fpr ? fixed(*r.fpr, 6) : "") << '\n';
  }
  if (!out) throw IoError("failed to write confusion CSV");
}

void write_bench_csv(std::ostream& out, std::span<const BenchReport> rows) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.filter << ',' << r.frame_size << ',' << r.events << ',' << fixed(r.wall_us(), 3) << ','
        << fixed(r.events_per_second(), 1) << '\n';
  }
  if (!out) throw IoError("failed to write bench CSV");
}

std::vector<FrameConfusion> parse_confusion_csv(std::istream& in) {
  std::string line;
  std::size_t n = 1;
  if (!std::getline(in, line) || line != kConfusionCsvHeader) throw ParseError(1, "missing confusion CSV header");
  std::vector<FrameConfusion> out;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 7) throw ParseError(n, "expected 7 fields");
    FrameConfusion fc;
    fc.frame_index = to_number<std::size_t>(f[0], n);
    fc.tp = to_number<std::uint64_t>(f[1], n);
    fc.fp = to_number<std::uint64_t>(f[2], n);
    fc.tn = to_number<std::uint64_t>(f[3], n);
    fc.fn = to_number<std::uint64_t>(f[4], n);
    fc.tpr = optional_ratio(f[5], n);
    fc.fpr = optional_ratio(f[6], n);
    out.push_back(fc);
  }
  return out;
}

std::vector<BenchReport> parse_bench_csv(std::istream& in) {
  std::string line;
  std::size_t n = 1;
  if (!std::getline(in, line) || line != kBenchCsvHeader) throw ParseError(1, "missing bench CSV header");
  std::vector<BenchReport> out;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 5) throw ParseError(n, "expected 5 fields");
    BenchReport r;
    r.filter = std::string(f[0]);
    r.frame_size = to_number<std::size_t>(f[1], n);
    r.events = to_number<std::uint64_t>(f[2], n);
    r.wall = std::chrono::nanoseconds(static_cast<std::int64_t>(to_number<double>(f[3], n) * 1e3 + 0.5));
    out.push_back(r);
  }
  return out;
}

}  // namespace evd
