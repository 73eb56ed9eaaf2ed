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

#include "evd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "evd/eval.hpp"
#include "evd/framing.hpp"
#include "evd/synthetic.hpp"

namespace evd::cli {

FilterSpec resolve_filter(const FilterOptions& options, const SensorGeometry& geometry) {
  FilterSpec spec;
  spec.kind = parse_filter_kind(options.filter);
  if (options.s == 0) throw ConfigError("--s must be at least 1");
  spec.config = FilterConfig::defaults(spec.kind, geometry, options.s);
  if (options.sf) spec.config.sf = ScalingFactor::parse(*options.sf);
  if (options.dt_us) {
    if (*options.dt_us == 0) throw ConfigError("--dt-us must be at least 1");
    spec.config.dt_fixed_us = *options.dt_us;
  }
  if (options.tgf_init_us) {
    if (*options.tgf_init_us == 0) throw ConfigError("--tgf-init-us must be at least 1");
    spec.config.tgf_init_us = *options.tgf_init_us;
  }
  spec.config.validate();
  return spec;
}

namespace {

EventStream load_stream_impl(const std::string& path, const GeometryOptions& overrides) {
  if (!overrides.width && !overrides.height && !overrides.mode) return read_stream_file(path);

  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  SensorGeometry geometry;
  std::string first;
  if (std::getline(in, first) && first.rfind("#evd1", 0) == 0) geometry = parse_header(first).geometry;
  if (overrides.width) geometry.width = *overrides.width;
  if (overrides.height) geometry.height = *overrides.height;
  if (overrides.mode) geometry.mode = parse_sensor_mode(*overrides.mode);
  in.clear();
  in.seekg(0);
  return read_stream(in, geometry);
}

}  // namespace

EventStream load_stream(const std::string& path, const GeometryOptions& overrides) {
  try {
    return load_stream_impl(path, overrides);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_decisions(std::ostream& out, std::span<const FilterDecision> decisions) {
  out << "#evd-decisions n=" << decisions.size() << '\n';
  for (const auto& d : decisions) out << (d.passed ? '1' : '0') << '\n';
  if (!out) throw IoError("failed to write decisions");
}

std::vector<std::uint8_t> read_decisions(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("#evd-decisions n=", 0) != 0) {
    throw ParseError(1, "missing '#evd-decisions' header");
  }
  const auto expected = std::stoull(line.substr(std::string_view("#evd-decisions n=").size()));
  std::vector<std::uint8_t> flags;
  flags.reserve(expected);
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line == "1") {
      flags.push_back(1);
    } else if (line == "0") {
      flags.push_back(0);
    } else if (!line.empty()) {
      throw ParseError(n, "decision must be 0 or 1, got '" + line + "'");
    }
  }
  if (flags.size() != expected) {
    throw ParseError(n, "header declares " + std::to_string(expected) + " decisions, found " +
                            std::to_string(flags.size()));
  }
  return flags;
}

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void add_geometry_flags(CLI::App* cmd, GeometryOptions& g) {
  cmd->add_option("--width", g.width, "Sensor width in pixels (overrides the stream header)");
  cmd->add_option("--height", g.height, "Sensor height in pixels (overrides the stream header)");
  cmd->add_option("--mode", g.mode, "Sensor timestamp mode")->check(CLI::IsMember({"standard", "celex"}));
}

void add_filter_flags(CLI::App* cmd, FilterOptions& f, const std::string& flag = "--filter") {
  cmd->add_option(flag, f.filter, "Filter: gf, bs1, bs2 or bs3")->check(CLI::IsMember({"gf", "bs1", "bs2", "bs3"}));
  cmd->add_option("--s", f.s, "Subsampling factor for gf and bs2")->check(CLI::PositiveNumber);
  cmd->add_option("--sf", f.sf, "GF scaling factor (decimal or a/b); default 10, or 0.2 for celex");
  cmd->add_option("--dt-us", f.dt_us, "Fixed baseline threshold in microseconds");
  cmd->add_option("--tgf-init-us", f.tgf_init_us, "GF threshold for the first frame, microseconds");
}

std::string describe(const FilterSpec& spec) {
  std::ostringstream os;
  os << spec.name() << ": ";
  if (spec.kind == FilterKind::gf) {
    os << "s=" << spec.config.s << " SF=" << spec.config.sf.to_string() << " TGF_init=" << spec.config.tgf_init_us
       << "us";
  } else {
    os << "dT=" << spec.config.dt_fixed_us << "us";
    if (spec.kind == FilterKind::bs2) os << " s=" << spec.config.s;
  }
  os << " mode=" << to_string(spec.config.geometry.mode);
  return os.str();
}

// Bench filter tokens: "gf", "bs2", or with an explicit s, "gf:2".
FilterSpec bench_spec(const std::string& token, const FilterOptions& base, const SensorGeometry& geometry) {
  FilterOptions opts = base;
  const auto colon = token.find(':');
  opts.filter = token.substr(0, colon);
  if (colon != std::string::npos) {
    try {
      opts.s = static_cast<std::uint32_t>(std::stoul(token.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("bad filter token '" + token + "'");
    }
  }
  return resolve_filter(opts, geometry);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Background-activity denoising for DVS event streams", "evd"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic labeled event stream");
  std::string gen_output;
  std::uint32_t gen_width = 128, gen_height = 128;
  std::string gen_mode = "standard";
  std::uint64_t seed = 1;
  double duration_ms = 1000, ba_rate = 5.0;
  std::string shape = "disc";
  double radius = 20, half_w = 10, half_h = 10, vx = 1.0, vy = 0.0, readout_us = 100;
  std::optional<double> cx, cy;
  bool no_bounce = false;
  gen->add_option("--output", gen_output, "Output stream path")->required();
  gen->add_option("--width", gen_width, "Sensor width")->check(CLI::PositiveNumber);
  gen->add_option("--height", gen_height, "Sensor height")->check(CLI::PositiveNumber);
  gen->add_option("--mode", gen_mode, "Sensor timestamp mode")->check(CLI::IsMember({"standard", "celex"}));
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--duration-ms", duration_ms, "Stream duration in milliseconds")->check(CLI::NonNegativeNumber);
  gen->add_option("--ba-rate", ba_rate, "Background activity per pixel, events/s")->check(CLI::NonNegativeNumber);
  gen->add_option("--shape", shape, "Object shape")->check(CLI::IsMember({"disc", "rect"}));
  gen->add_option("--radius", radius, "Disc radius, pixels");
  gen->add_option("--half-width", half_w, "Rectangle half width, pixels");
  gen->add_option("--half-height", half_h, "Rectangle half height, pixels");
  gen->add_option("--cx", cx, "Initial object centre x (default: sensor centre)");
  gen->add_option("--cy", cy, "Initial object centre y (default: sensor centre)");
  gen->add_option("--vx", vx, "Velocity x, pixels/ms");
  gen->add_option("--vy", vy, "Velocity y, pixels/ms");
  gen->add_flag("--no-bounce", no_bounce, "Let the object leave the sensor instead of bouncing");
  gen->add_option("--readout-us", readout_us, "CeleX row readout window, microseconds")->check(CLI::PositiveNumber);

  // filter
  auto* flt = app.add_subcommand("filter", "Denoise a stream");
  std::string input, output;
  GeometryOptions geo;
  FilterOptions fopts;
  std::size_t frame_size = 5000;
  std::optional<std::string> decisions_path, discarded_path;
  flt->add_option("--input", input, "Input stream")->required();
  flt->add_option("--output", output, "Passed events")->required();
  add_geometry_flags(flt, geo);
  add_filter_flags(flt, fopts);
  flt->add_option("--frame-size", frame_size, "Events per frame (GF statistics)")->check(CLI::PositiveNumber);
  flt->add_option("--decisions", decisions_path, "Write a per-event pass/discard sidecar");
  flt->add_option("--discarded", discarded_path, "Write discarded events to this stream");

  // render
  auto* rnd = app.add_subcommand("render", "Render fixed-count frames to PGM");
  std::size_t max_frames = 0;
  rnd->add_option("--input", input, "Input stream")->required();
  rnd->add_option("--output", output, "Output stem; frames go to <stem>_<index>.pgm")->required();
  add_geometry_flags(rnd, geo);
  rnd->add_option("--frame-size", frame_size, "Events per frame")->check(CLI::PositiveNumber);
  rnd->add_option("--max-frames", max_frames, "Stop after this many frames (0 = all)");

  // evaluate
  auto* evl = app.add_subcommand("evaluate", "Per-frame TPR/FPR of a candidate filter");
  FilterOptions ref_opts;
  ref_opts.s = 2;
  bool ground_truth = false;
  std::optional<std::string> evl_output;
  evl->add_option("--input", input, "Input stream")->required();
  evl->add_option("--output", evl_output, "Confusion CSV (default: stdout)");
  add_geometry_flags(evl, geo);
  add_filter_flags(evl, fopts);
  evl->add_option("--frame-size", frame_size, "Events per frame")->check(CLI::PositiveNumber);
  evl->add_option("--decisions", decisions_path, "Use this decisions sidecar instead of running --filter");
  evl->add_option("--reference", ref_opts.filter, "Reference labeler")
      ->check(CLI::IsMember({"gf", "bs1", "bs2", "bs3"}));
  evl->add_option("--ref-s", ref_opts.s, "Reference subsampling factor")->check(CLI::PositiveNumber);
  evl->add_flag("--ground-truth", ground_truth, "Use labels embedded in the stream instead of a reference");

  // bench
  auto* bch = app.add_subcommand("bench", "Time filter decision loops");
  std::vector<std::string> bench_filters{"gf:1", "gf:2", "bs1", "bs2:2", "bs3"};
  std::vector<std::size_t> bench_frames{5000};
  std::size_t repetitions = 3, bench_events = 3'000'000;
  std::optional<std::string> bch_input, bch_output;
  bch->add_option("--input", bch_input, "Input stream (default: synthetic)");
  bch->add_option("--output", bch_output, "Bench CSV (default: stdout)");
  add_geometry_flags(bch, geo);
  bch->add_option("--filter", bench_filters, "Filters to time; 'gf:2' pins s")->delimiter(',');
  bch->add_option("--s", fopts.s, "Default subsampling factor")->check(CLI::PositiveNumber);
  bch->add_option("--sf", fopts.sf, "GF scaling factor");
  bch->add_option("--dt-us", fopts.dt_us, "Fixed baseline threshold in microseconds");
  bch->add_option("--tgf-init-us", fopts.tgf_init_us, "GF first-frame threshold");
  bch->add_option("--frame-size", bench_frames, "Events per frame; repeatable")->delimiter(',');
  bch->add_option("--repetitions", repetitions, "Runs per configuration; the minimum is reported")
      ->check(CLI::PositiveNumber);
  bch->add_option("--events", bench_events, "Synthetic stream length when no --input is given")
      ->check(CLI::PositiveNumber);
  bch->add_option("--seed", seed, "Synthetic stream seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) {
      SyntheticConfig cfg;
      cfg.geometry = {gen_width, gen_height, parse_sensor_mode(gen_mode)};
      cfg.duration_us = static_cast<Micros>(duration_ms * 1000.0);
      cfg.ba_rate_hz = ba_rate;
      cfg.seed = seed;
      cfg.celex_readout_us = static_cast<Micros>(readout_us);
      cfg.object.shape = shape == "rect" ? ShapeKind::rectangle : ShapeKind::disc;
      cfg.object.radius = radius;
      cfg.object.half_width = half_w;
      cfg.object.half_height = half_h;
      cfg.object.start_x = cx.value_or(gen_width / 2.0);
      cfg.object.start_y = cy.value_or(gen_height / 2.0);
      cfg.object.velocity_x = vx;
      cfg.object.velocity_y = vy;
      cfg.object.bounce = !no_bounce;
      const auto events = generate_synthetic(cfg);
      auto os = open_out(gen_output);
      write_stream(os, {cfg.geometry, default_payload(cfg.geometry.mode)}, std::span<const LabeledEvent>(events));
      err << "generate: " << events.size() << " events -> " << gen_output << '\n';
      return 0;
    }

    if (*flt) {
      const auto stream = load_stream(input, geo);
      const auto spec = resolve_filter(fopts, stream.header.geometry);
      const auto decisions = run_filter(spec.kind, spec.config, stream.events, frame_size);

      EventStream passed{stream.header, {}, {}};
      EventStream dropped{stream.header, {}, {}};
      for (std::size_t i = 0; i < decisions.size(); ++i) {
        auto& dst = decisions[i].passed ? passed : dropped;
        dst.events.push_back(decisions[i].event);
        if (stream.labeled()) dst.labels.push_back(stream.labels[i]);
      }
      write_stream_file(output, passed);
      if (discarded_path) write_stream_file(*discarded_path, dropped);
      if (decisions_path) {
        auto os = open_out(*decisions_path);
        write_decisions(os, decisions);
      }
      err << describe(spec) << "; passed " << passed.events.size() << " of " << stream.events.size() << '\n';
      return 0;
    }

    if (*rnd) {
      const auto stream = load_stream(input, geo);
      const auto frames = accumulate(stream.events, frame_size);
      const auto limit = max_frames == 0 ? frames.size() : std::min(max_frames, frames.size());
      if (const auto dir = std::filesystem::path(output).parent_path(); !dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
      }
      for (std::size_t i = 0; i < limit; ++i) {
        write_pgm_file(frame_file_name(output, frames[i].index), render(frames[i], stream.header.geometry));
      }
      err << "render: " << limit << " frames -> " << output << "_<index>.pgm\n";
      return 0;
    }

    if (*evl) {
      const auto stream = load_stream(input, geo);
      std::vector<LabeledEvent> labeled;
      if (ground_truth) {
        if (!stream.labeled()) throw ConfigError("--ground-truth requires a labeled stream: " + input);
        labeled = stream.labeled_events();
      } else {
        const auto ref = resolve_filter(ref_opts, stream.header.geometry);
        labeled = label_with_reference(stream.events, ref, frame_size);
      }

      std::vector<FilterDecision> candidate;
      if (decisions_path) {
        std::ifstream in(*decisions_path);
        if (!in) throw IoError("cannot open '" + *decisions_path + "' for reading");
        const auto flags = read_decisions(in);
        if (flags.size() != stream.events.size()) {
          throw AlignmentError("decisions file " + *decisions_path + " has " + std::to_string(flags.size()) +
                               " entries for " + std::to_string(stream.events.size()) + " events");
        }
        candidate.reserve(flags.size());
        for (std::size_t i = 0; i < flags.size(); ++i) candidate.push_back({stream.events[i], flags[i] != 0});
      } else {
        const auto spec = resolve_filter(fopts, stream.header.geometry);
        candidate = run_filter(spec.kind, spec.config, stream.events, frame_size);
      }

      const auto rows = confusion(labeled, candidate, frame_size);
      if (evl_output) {
        auto os = open_out(*evl_output);
        write_confusion_csv(os, rows);
      } else {
        write_confusion_csv(out, rows);
      }
      const auto summary = summarize(rows);
      err << "evaluate: " << summary.frames << " full frames";
      if (summary.mean_tpr) err << ", mean TPR " << *summary.mean_tpr;
      if (summary.mean_fpr) err << ", mean FPR " << *summary.mean_fpr;
      err << '\n';
      return 0;
    }

    if (*bch) {
      std::vector<Event> events;
      SensorGeometry geometry;
      if (bch_input) {
        auto stream = load_stream(*bch_input, geo);
        geometry = stream.header.geometry;
        events = std::move(stream.events);
      } else {
        SyntheticConfig cfg;
        cfg.geometry = {geo.width.value_or(128), geo.height.value_or(128),
                        parse_sensor_mode(geo.mode.value_or("standard"))};
        cfg.object.start_x = cfg.geometry.width / 2.0;
        cfg.object.start_y = cfg.geometry.height / 2.0;
        cfg.object.velocity_x = 0.6;
        cfg.object.velocity_y = 0.8;
        cfg.seed = seed;
        cfg.duration_us = 10'000'000;
        geometry = cfg.geometry;
        const auto labeled = generate_event_count(cfg, bench_events);
        events.reserve(labeled.size());
        for (const auto& le : labeled) events.push_back(le.event);
      }

      std::vector<BenchReport> reports;
      for (const auto& token : bench_filters) {
        const auto spec = bench_spec(token, fopts, geometry);
        for (auto fs : bench_frames) reports.push_back(bench(spec, events, fs, repetitions));
      }
      if (bch_output) {
        auto os = open_out(*bch_output);
        write_bench_csv(os, reports);
      } else {
        write_bench_csv(out, reports);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "evd: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "evd: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace evd::cli
