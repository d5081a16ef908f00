#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "gazectl/calibration.hpp"
#include "gazectl/engine.hpp"
#include "gazectl/profile.hpp"
#include "gazectl/replay.hpp"
#include "gazectl/sinks.hpp"
#include "gazectl/snapshot.hpp"
#include "gazectl/sources.hpp"

namespace gazectl::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

std::optional<ScreenSize> parse_screen(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) return std::nullopt;
  ScreenSize s;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [p1, e1] = std::from_chars(begin, begin + x, s.width);
  auto [p2, e2] = std::from_chars(begin + x + 1, end, s.height);
  if (e1 != std::errc() || e2 != std::errc() || p1 != begin + x || p2 != end) return std::nullopt;
  if (s.width < 2 || s.height < 2) return std::nullopt;
  return s;
}

Profile load_profile_or_fail(const std::string& path, std::ostream& err) {
  auto loaded = load_profile(path);
  if (!loaded) throw Failure{kConfigError, path + ": " + loaded.error().describe()};
  for (const auto& w : loaded->warnings) err << path << ": warning: " << w << '\n';
  return std::move(loaded->profile);
}

std::optional<CalibrationModel> load_model_or_fail(const std::string& path) {
  if (path.empty()) return std::nullopt;
  auto model = load_model(path);
  if (!model) throw Failure{kRuntimeError, path + ": " + model.error()};
  return std::move(*model);
}

EngineOptions engine_options(const std::string& screen) {
  EngineOptions options;
  if (screen.empty()) return options;
  const auto parsed = parse_screen(screen);
  if (!parsed) throw Failure{kConfigError, "--screen expects WIDTHxHEIGHT, got '" + screen + "'"};
  options.screen = *parsed;
  return options;
}

void write_log(const EventLog& log, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    log.write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Failure{kRuntimeError, "cannot write " + path};
  log.write(file);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kRuntimeError, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// --- run ----------------------------------------------------------------

struct RunArgs {
  std::string profile;
  std::string source;
  std::string sink = "virtual";
  std::string log;
  std::string model;
  std::string screen;
  std::string ui;
  std::string record;
  std::size_t queue = 64;
};

int cmd_run(const RunArgs& args, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto options = engine_options(args.screen);
  Engine engine(load_profile_or_fail(args.profile, err), load_model_or_fail(args.model), options);

  std::unique_ptr<EventSink> sink;
  if (args.sink == "os") {
    try {
      sink = std::make_unique<OsSink>(std::make_unique<UinputBackend>(options.screen));
    } catch (const std::exception& e) {
      throw Failure{kRuntimeError, e.what()};
    }
  } else {
    sink = std::make_unique<VirtualSink>();
  }

  std::unique_ptr<SnapshotSink> snapshots;
  std::ofstream ui_file;
  if (!args.ui.empty()) {
    if (const auto ep = parse_tcp_endpoint(args.ui)) {
      auto broadcaster = TcpSnapshotBroadcaster::listen(ep->host, ep->port);
      if (!broadcaster) throw Failure{kRuntimeError, broadcaster.error()};
      err << "snapshots on " << ep->host << ':' << (*broadcaster)->port() << '\n';
      snapshots = std::move(*broadcaster);
    } else {
      ui_file.open(args.ui, std::ios::binary);
      if (!ui_file) throw Failure{kRuntimeError, "cannot write " + args.ui};
      snapshots = std::make_unique<StreamSnapshotWriter>(ui_file);
    }
  }

  auto source = open_source(args.source, in);
  if (!source) throw Failure{kRuntimeError, source.error()};
  if (const auto* tcp = dynamic_cast<TcpLineSource*>(source->get())) {
    err << "waiting for frames on port " << tcp->port() << '\n';
  }

  std::ofstream record_file;
  if (!args.record.empty()) {
    record_file.open(args.record, std::ios::binary);
    if (!record_file) throw Failure{kRuntimeError, "cannot write " + args.record};
  }

  LiveOptions live;
  live.queue_capacity = args.queue;
  live.record_to = args.record.empty() ? nullptr : &record_file;
  live.stream.sink = sink.get();
  live.stream.snapshots = snapshots.get();
  StreamStats stats;
  const EventLog log = run_live(**source, engine, live, &stats);
  write_log(log, args.log, out);
  err << stats.frames << " frames, " << stats.rejected << " rejected, " << log.event_count() << " events\n";
  return kOk;
}

// --- replay -------------------------------------------------------------

struct ReplayArgs {
  std::string profile;
  std::string trace;
  std::string speed = "max";
  std::string golden;
  std::string log;
  std::string model;
  std::string screen;
};

int cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err) {
  Engine engine(load_profile_or_fail(args.profile, err), load_model_or_fail(args.model), engine_options(args.screen));
  ReplayOptions options;
  options.speed = args.speed == "realtime" ? ReplaySpeed::kRealtime : ReplaySpeed::kMax;
  auto log = run_replay_file(args.trace, engine, options);
  if (!log) throw Failure{kRuntimeError, log.error()};

  if (args.golden.empty()) {
    write_log(*log, args.log, out);
    return kOk;
  }
  if (!args.log.empty()) write_log(*log, args.log, out);
  const auto expected = split_lines(read_text(args.golden));
  const auto actual = split_lines(log->to_text());
  for (std::size_t i = 0; i < std::max(expected.size(), actual.size()); ++i) {
    const std::string want = i < expected.size() ? expected[i] : "<end of log>";
    const std::string got = i < actual.size() ? actual[i] : "<end of log>";
    if (want != got) {
      err << "golden mismatch at line " << i + 1 << "\n  expected: " << want << "\n  actual:   " << got << '\n';
      return kGoldenMismatch;
    }
  }
  err << "golden match (" << actual.size() << " lines)\n";
  return kOk;
}

// --- record -------------------------------------------------------------

int cmd_record(const std::string& source_spec, const std::string& path, std::istream& in, std::ostream& err) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Failure{kRuntimeError, "cannot write " + path};
  auto source = open_source(source_spec, in);
  if (!source) throw Failure{kRuntimeError, source.error()};
  const auto frames = record(**source, file);
  err << "recorded " << frames << " frames to " << path << '\n';
  return kOk;
}

// --- calibrate ----------------------------------------------------------

int cmd_calibrate(const std::string& samples_path, const std::string& model_path, std::ostream& err) {
  auto set = load_samples(samples_path);
  if (!set) throw Failure{kRuntimeError, samples_path + ": " + set.error()};
  if (!set->complete) throw Failure{kRuntimeError, samples_path + ": calibration session is incomplete; refusing to fit"};
  CalibrationModel model;
  try {
    model = fit_calibration(set->samples);
  } catch (const CalibrationError& e) {
    throw Failure{kRuntimeError, e.what()};
  }
  save_model(model, model_path);
  err << "fitted " << set->samples.size() << " samples: lambda " << model.lambda << ", cv mse " << model.cv_mse << '\n';
  return kOk;
}

// --- check-config -------------------------------------------------------

std::vector<std::string> parse_required_keys(const std::string& spec) {
  std::string text = spec;
  if (spec.starts_with('@')) text = read_text(spec.substr(1));
  std::vector<std::string> keys;
  std::string current;
  for (char c : text + "\n") {
    if (c == ',' || c == '\n' || c == ' ' || c == '\t' || c == '\r') {
      if (!current.empty()) keys.push_back(std::exchange(current, {}));
    } else {
      current += c;
    }
  }
  return keys;
}

int cmd_check_config(const std::string& path, const std::string& required_spec, std::ostream& out, std::ostream& err) {
  const Profile profile = load_profile_or_fail(path, err);
  out << path << ": " << profile.modes.size() << " modes, " << profile.intentions.size() << " intentions, "
      << profile.priority_rules.size() << " priority rules\n";
  if (required_spec.empty()) return kOk;

  const auto required = parse_required_keys(required_spec);
  const auto report = validate_coverage(profile, required);
  out << report.reachable.size() << "/" << required.size() << " required keys reachable\n";
  for (const auto& key : report.unreachable) out << "unreachable: " << key << '\n';
  return report.complete() ? kOk : kConfigError;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hands-free input from facial expressions, gaze and head pose"};
  app.name("gazectl");
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Drive input from a live frame stream");
  run->add_option("--profile", run_args.profile, "Profile YAML")->required();
  run->add_option("--source", run_args.source, "stdin or tcp:HOST:PORT")->required();
  run->add_option("--sink", run_args.sink, "os or virtual")->check(CLI::IsMember({"os", "virtual"}));
  run->add_option("--log", run_args.log, "Event log path (default stdout)");
  run->add_option("--model", run_args.model, "Calibration model JSON");
  run->add_option("--screen", run_args.screen, "Screen size WIDTHxHEIGHT");
  run->add_option("--ui", run_args.ui, "Snapshot output: file path or tcp:HOST:PORT");
  run->add_option("--record", run_args.record, "Copy every frame the engine consumed to this trace");
  run->add_option("--queue", run_args.queue, "Frames buffered ahead of the engine")->check(CLI::Range(1, 1 << 20));

  ReplayArgs replay_args;
  auto* replay = app.add_subcommand("replay", "Run a recorded trace through the engine");
  replay->add_option("--profile", replay_args.profile, "Profile YAML")->required();
  replay->add_option("--trace", replay_args.trace, "Trace file")->required();
  replay->add_option("--speed", replay_args.speed, "max or realtime")->check(CLI::IsMember({"max", "realtime"}));
  replay->add_option("--golden", replay_args.golden, "Expected event log");
  replay->add_option("--log", replay_args.log, "Event log path (default stdout)");
  replay->add_option("--model", replay_args.model, "Calibration model JSON");
  replay->add_option("--screen", replay_args.screen, "Screen size WIDTHxHEIGHT");

  std::string record_source;
  std::string record_out;
  auto* rec = app.add_subcommand("record", "Save a frame stream as a trace");
  rec->add_option("--source", record_source, "stdin or tcp:HOST:PORT")->required();
  rec->add_option("--out", record_out, "Trace file")->required();

  std::string samples_path;
  std::string model_path;
  auto* calibrate = app.add_subcommand("calibrate", "Fit a gaze model from calibration samples");
  calibrate->add_option("--samples", samples_path, "Samples JSON")->required();
  calibrate->add_option("--out", model_path, "Model JSON")->required();

  std::string check_path;
  std::string required_keys;
  auto* check = app.add_subcommand("check-config", "Validate a profile");
  check->add_option("profile", check_path, "Profile YAML")->required();
  check->add_option("--require-keys", required_keys, "Comma list or @file of keys that must be reachable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_args, in, out, err);
    if (*replay) return cmd_replay(replay_args, out, err);
    if (*rec) return cmd_record(record_source, record_out, in, err);
    if (*calibrate) return cmd_calibrate(samples_path, model_path, err);
    if (*check) return cmd_check_config(check_path, required_keys, out, err);
  } catch (const Failure& f) {
    err << "gazectl: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << "gazectl: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace gazectl::cli
