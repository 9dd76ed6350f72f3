#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "r2usbl/agc.hpp"
#include "r2usbl/array.hpp"
#include "r2usbl/chansim.hpp"
#include "r2usbl/clock.hpp"
#include "r2usbl/error.hpp"
#include "r2usbl/raw_frame.hpp"
#include "r2usbl/waveform.hpp"

namespace r2usbl::config {

enum class Mode { beacon, receiver, simulate, replay, sweep };

std::string_view to_string(Mode m);

struct ChirpConfig {
  double f_start = 10000.0;
  double f_stop = 12000.0;
  double duration = 0.05;
  waveform::Window window = waveform::Window::tukey(0.1);
};

struct ArrayConfig {
  double radius = 0.075;
  std::size_t elements = 6;
};

/// Unset edges default to the chirp band widened by 500 Hz on each side.
struct BandpassConfig {
  std::optional<double> low;
  std::optional<double> high;
  std::size_t taps = 255;
};

struct DetectionConfig {
  double threshold = 0.3;
  bool subsample = false;
};

struct DoaConfig {
  double grid_deg = 1.0;
  bool refine = true;
};

/// Linear correction applied when converting TOF to range: offset + rate·t.
struct ClockCorrection {
  double offset = 0.0;
  double rate = 0.0;
};

struct ClocksConfig {
  clock::ClockModel beacon;
  clock::ClockModel receiver;
  ClockCorrection correction;
};

/// Receiver navigation used when the frame source carries none (receive, replay).
struct NavigationConfig {
  double heading = 0.0;
  double north = 0.0;
  double east = 0.0;
  double depth_difference = 0.0;
};

struct OutputConfig {
  std::optional<std::uint16_t> tcp_port;
  std::optional<std::string> serial_path;
};

struct SweepConfig {
  double range_min = 1.0;
  double range_max = 23.0;
  double range_step = 1.0;
  double bearing_step = 10.0;
  double depth = 5.0;
  chansim::PropagationMode propagation = chansim::PropagationMode::planewave;
};

struct Config {
  Mode mode = Mode::receiver;
  double sample_rate = 48000.0;
  ChirpConfig chirp;
  double ping_interval = 1.0;
  array::SoundSpeedSource sound_speed = 1500.0;
  ArrayConfig array;
  BandpassConfig bandpass;
  DetectionConfig detection;
  DoaConfig doa;
  agc::AgcState agc;
  ClocksConfig clocks;
  NavigationConfig navigation;
  OutputConfig output;
  SweepConfig sweep;
  std::string log_dir = "logs";
  bool log_raw_frames = false;
  /// Unset: int16 for captured frames, float32 for simulated ones.
  std::optional<rawframe::SampleFormat> raw_format;
  std::uint64_t seed = 1;

  double bandpass_low() const { return bandpass.low.value_or(chirp.f_start - 500.0); }
  double bandpass_high() const { return bandpass.high.value_or(chirp.f_stop + 500.0); }
  std::size_t frame_length() const;
};

/// Configuration failure with the offending key path and, when known, the
/// 1-based source line.
class ConfigError : public Error {
 public:
  ConfigError(Errc code, std::string key, std::string reason, int line = 0);

  const std::string& key() const { return key_; }
  const std::string& reason() const { return reason_; }
  int line() const { return line_; }

 private:
  std::string key_;
  std::string reason_;
  int line_;
};

Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// Checks cross-field constraints; parse_config calls it.
void validate(const Config& config);

}  // namespace r2usbl::config
