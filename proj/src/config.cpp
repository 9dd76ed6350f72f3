#include "r2usbl/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "yaml_read.hpp"

namespace r2usbl::config {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::beacon: return "beacon";
    case Mode::receiver: return "receiver";
    case Mode::simulate: return "simulate";
    case Mode::replay: return "replay";
    case Mode::sweep: return "sweep";
  }
  return "receiver";
}

ConfigError::ConfigError(Errc code, std::string key, std::string reason, int line)
    : Error(code, line > 0 ? fmt::format("{} (line {}): {}", key, line, reason) : fmt::format("{}: {}", key, reason)),
      key_(std::move(key)),
      reason_(std::move(reason)),
      line_(line) {}

std::size_t Config::frame_length() const {
  return static_cast<std::size_t>(std::llround(ping_interval * sample_rate));
}

namespace {

using namespace yaml_read;

void read_clock(const YAML::Node& n, const std::string& path, clock::ClockModel& m) {
  check_map(n, path, {"initial_offset", "drift_rate", "pps_interval", "random_walk"});
  read(n, "initial_offset", path, m.initial_offset);
  read(n, "drift_rate", path, m.drift_rate);
  read(n, "pps_interval", path, m.pps_interval);
  read(n, "random_walk", path, m.random_walk);
}

Mode parse_mode(const YAML::Node& n) {
  const auto s = scalar<std::string>(n, "mode", "a mode name");
  if (s == "beacon") return Mode::beacon;
  if (s == "receiver" || s == "receive") return Mode::receiver;
  if (s == "simulate") return Mode::simulate;
  if (s == "replay") return Mode::replay;
  if (s == "sweep") return Mode::sweep;
  throw ConfigError(Errc::ValidationError, "mode", fmt::format("unknown mode '{}'", s), line_of(n));
}

void fail(const std::string& key, const std::string& reason) { throw ConfigError(Errc::ValidationError, key, reason); }

}  // namespace

Config parse_config(std::string_view text) {
  using namespace yaml_read;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(Errc::ParseError, "<document>", e.msg, e.mark.line + 1);
  }
  if (!root.IsDefined() || root.IsNull()) throw ConfigError(Errc::ValidationError, "<document>", "empty configuration");

  check_map(root, "", {"mode", "sample_rate", "chirp", "ping_interval", "sound_speed", "array", "bandpass",
                       "detection", "doa", "agc", "clocks", "navigation", "output", "sweep", "log_dir",
                       "log_raw_frames", "raw_format", "seed"});
  Config c;
  if (!root["mode"]) fail("mode", "required");
  if (!root["sample_rate"]) fail("sample_rate", "required");
  c.mode = parse_mode(root["mode"]);
  read(root, "sample_rate", "", c.sample_rate);
  read(root, "ping_interval", "", c.ping_interval);

  if (const auto n = root["chirp"]) {
    check_map(n, "chirp", {"f_start", "f_stop", "duration", "window", "tukey_alpha"});
    read(n, "f_start", "chirp", c.chirp.f_start);
    read(n, "f_stop", "chirp", c.chirp.f_stop);
    read(n, "duration", "chirp", c.chirp.duration);
    if (const auto w = n["window"]) {
      const auto s = scalar<std::string>(w, "chirp.window", "a window name");
      if (s == "rectangular") {
        c.chirp.window = waveform::Window::rectangular();
      } else if (s == "tukey") {
        c.chirp.window = waveform::Window::tukey(0.1);
      } else {
        throw ConfigError(Errc::ValidationError, "chirp.window", fmt::format("unknown window '{}'", s), line_of(w));
      }
    }
    if (n["tukey_alpha"]) {
      double alpha = 0.1;
      read(n, "tukey_alpha", "chirp", alpha);
      if (alpha < 0 || alpha > 1) fail("chirp.tukey_alpha", "must lie in [0, 1]");
      if (c.chirp.window.kind == waveform::Window::Kind::tukey) c.chirp.window.alpha = alpha;
    }
  }

  if (const auto n = root["sound_speed"]) {
    if (n.IsScalar()) {
      c.sound_speed = scalar<double>(n, "sound_speed", "a number or water properties");
    } else {
      check_map(n, "sound_speed", {"temperature", "salinity", "depth", "latitude"});
      array::WaterProperties w;
      read(n, "temperature", "sound_speed", w.temperature);
      read(n, "salinity", "sound_speed", w.salinity);
      read(n, "depth", "sound_speed", w.depth);
      read(n, "latitude", "sound_speed", w.latitude);
      c.sound_speed = w;
    }
  }

  if (const auto n = root["array"]) {
    check_map(n, "array", {"radius", "elements"});
    read(n, "radius", "array", c.array.radius);
    read(n, "elements", "array", c.array.elements);
  }
  if (const auto n = root["bandpass"]) {
    check_map(n, "bandpass", {"low", "high", "taps"});
    read(n, "low", "bandpass", c.bandpass.low);
    read(n, "high", "bandpass", c.bandpass.high);
    read(n, "taps", "bandpass", c.bandpass.taps);
  }
  if (const auto n = root["detection"]) {
    check_map(n, "detection", {"threshold", "subsample"});
    read(n, "threshold", "detection", c.detection.threshold);
    read(n, "subsample", "detection", c.detection.subsample);
  }
  if (const auto n = root["doa"]) {
    check_map(n, "doa", {"grid_deg", "refine"});
    read(n, "grid_deg", "doa", c.doa.grid_deg);
    read(n, "refine", "doa", c.doa.refine);
  }
  if (const auto n = root["agc"]) {
    check_map(n, "agc", {"initial_db", "lower", "upper", "step_db", "min_db", "max_db"});
    read(n, "initial_db", "agc", c.agc.gain_db);
    read(n, "lower", "agc", c.agc.lower_threshold);
    read(n, "upper", "agc", c.agc.upper_threshold);
    read(n, "step_db", "agc", c.agc.step_db);
    read(n, "min_db", "agc", c.agc.min_gain_db);
    read(n, "max_db", "agc", c.agc.max_gain_db);
  }
  if (const auto n = root["clocks"]) {
    check_map(n, "clocks", {"beacon", "receiver", "correction"});
    if (n["beacon"]) read_clock(n["beacon"], "clocks.beacon", c.clocks.beacon);
    if (n["receiver"]) read_clock(n["receiver"], "clocks.receiver", c.clocks.receiver);
    if (const auto k = n["correction"]) {
      check_map(k, "clocks.correction", {"offset", "rate"});
      read(k, "offset", "clocks.correction", c.clocks.correction.offset);
      read(k, "rate", "clocks.correction", c.clocks.correction.rate);
    }
  }
  if (const auto n = root["navigation"]) {
    check_map(n, "navigation", {"heading", "north", "east", "depth_difference"});
    read(n, "heading", "navigation", c.navigation.heading);
    read(n, "north", "navigation", c.navigation.north);
    read(n, "east", "navigation", c.navigation.east);
    read(n, "depth_difference", "navigation", c.navigation.depth_difference);
  }
  if (const auto n = root["output"]) {
    check_map(n, "output", {"tcp_port", "serial_path"});
    if (const auto p = n["tcp_port"]) {
      const auto port = scalar<long long>(p, "output.tcp_port", "a port number");
      if (port < 0 || port > 65535) fail("output.tcp_port", "must lie in [0, 65535]");
      c.output.tcp_port = static_cast<std::uint16_t>(port);
    }
    if (n["serial_path"]) {
      std::string path;
      read(n, "serial_path", "output", path);
      c.output.serial_path = path;
    }
  }
  if (const auto n = root["sweep"]) {
    check_map(n, "sweep", {"range_min", "range_max", "range_step", "bearing_step", "depth", "propagation"});
    read(n, "range_min", "sweep", c.sweep.range_min);
    read(n, "range_max", "sweep", c.sweep.range_max);
    read(n, "range_step", "sweep", c.sweep.range_step);
    read(n, "bearing_step", "sweep", c.sweep.bearing_step);
    read(n, "depth", "sweep", c.sweep.depth);
    if (const auto p = n["propagation"]) {
      const auto s = scalar<std::string>(p, "sweep.propagation", "planewave or spherical");
      if (s == "planewave") {
        c.sweep.propagation = chansim::PropagationMode::planewave;
      } else if (s == "spherical") {
        c.sweep.propagation = chansim::PropagationMode::spherical;
      } else {
        throw ConfigError(Errc::ValidationError, "sweep.propagation", fmt::format("unknown mode '{}'", s),
                          line_of(p));
      }
    }
  }
  read(root, "log_dir", "", c.log_dir);
  read(root, "log_raw_frames", "", c.log_raw_frames);
  if (const auto n = root["raw_format"]) {
    const auto s = scalar<std::string>(n, "raw_format", "int16 or float32");
    if (s == "int16") {
      c.raw_format = rawframe::SampleFormat::int16;
    } else if (s == "float32") {
      c.raw_format = rawframe::SampleFormat::float32;
    } else {
      throw ConfigError(Errc::ValidationError, "raw_format", fmt::format("unknown format '{}'", s), line_of(n));
    }
  }
  if (const auto n = root["seed"]) c.seed = scalar<std::uint64_t>(n, "seed", "a non-negative integer");

  validate(c);
  return c;
}

void validate(const Config& c) {
  if (!(c.sample_rate > 0)) fail("sample_rate", "must be positive");
  const double nyquist = c.sample_rate / 2;
  if (!(c.chirp.f_start > 0)) fail("chirp.f_start", "must be positive");
  if (!(c.chirp.f_stop >= c.chirp.f_start)) fail("chirp.f_stop", "below chirp.f_start");
  if (!(c.chirp.f_stop < nyquist)) fail("chirp.f_stop", "exceeds Nyquist");
  if (!(c.chirp.duration > 0)) fail("chirp.duration", "must be positive");
  if (!(c.ping_interval > 0)) fail("ping_interval", "must be positive");
  if (!(c.ping_interval > c.chirp.duration)) fail("ping_interval", "must exceed chirp.duration");
  if (const auto* fixed = std::get_if<double>(&c.sound_speed)) {
    if (*fixed < 1400 || *fixed > 1600) fail("sound_speed", "fixed sound speed outside [1400, 1600] m/s");
  } else {
    try {
      array::sound_speed(c.sound_speed);
    } catch (const Error& e) {
      fail("sound_speed", e.what());
    }
  }
  if (!(c.array.radius > 0)) fail("array.radius", "must be positive");
  if (c.array.elements < 3) fail("array.elements", "need at least 3");
  if (!(c.bandpass_low() > 0)) fail("bandpass.low", "must be positive");
  if (!(c.bandpass_high() > c.bandpass_low())) fail("bandpass.high", "must exceed bandpass.low");
  if (!(c.bandpass_high() < nyquist)) fail("bandpass.high", "exceeds Nyquist");
  if (c.bandpass.taps % 2 == 0) fail("bandpass.taps", "must be odd");
  if (c.bandpass.taps < 31) fail("bandpass.taps", "need at least 31");
  if (!(c.detection.threshold >= 0 && c.detection.threshold <= 1)) fail("detection.threshold", "must lie in [0, 1]");
  if (!(c.doa.grid_deg > 0 && c.doa.grid_deg <= 30)) fail("doa.grid_deg", "must lie in (0, 30]");
  if (!(c.agc.lower_threshold > 0)) fail("agc.lower", "must be positive");
  if (!(c.agc.upper_threshold > c.agc.lower_threshold)) fail("agc.upper", "must exceed agc.lower");
  if (!(c.agc.step_db > 0)) fail("agc.step_db", "must be positive");
  if (!(c.agc.min_gain_db <= c.agc.max_gain_db)) fail("agc.max_db", "below agc.min_db");
  if (!(c.agc.gain_db >= c.agc.min_gain_db && c.agc.gain_db <= c.agc.max_gain_db)) {
    fail("agc.initial_db", "outside [agc.min_db, agc.max_db]");
  }
  for (const auto& [name, m] : {std::pair{"clocks.beacon", c.clocks.beacon}, std::pair{"clocks.receiver", c.clocks.receiver}}) {
    try {
      clock::validate(m);
    } catch (const Error& e) {
      fail(name, e.what());
    }
  }
  if (!(c.sweep.range_min > 0 && c.sweep.range_max >= c.sweep.range_min && c.sweep.range_step > 0)) {
    fail("sweep", "ranges must satisfy 0 < range_min <= range_max with a positive step");
  }
  if (!(c.sweep.bearing_step > 0 && c.sweep.bearing_step <= 360)) fail("sweep.bearing_step", "must lie in (0, 360]");
  if (c.sweep.depth < 0) fail("sweep.depth", "must be non-negative");
  if (c.log_dir.empty()) fail("log_dir", "must not be empty");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot open config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace r2usbl::config
