#include "r2usbl/chansim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "r2usbl/error.hpp"
#include "r2usbl/fft.hpp"

namespace r2usbl::chansim {

using std::numbers::pi;

PathSpec default_path(PathKind kind) {
  switch (kind) {
    case PathKind::direct: return {PathKind::direct, 1.0};
    case PathKind::surface: return {PathKind::surface, -1.0};
    case PathKind::bottom: return {PathKind::bottom, 0.5};
  }
  return {};
}

void validate(const SceneSpec& s) {
  if (s.beacon.depth < 0 || s.receiver.depth < 0) throw Error(Errc::InvalidScene, "negative depth");
  if (s.water_depth < std::max(s.beacon.depth, s.receiver.depth)) {
    throw Error(Errc::InvalidScene, fmt::format("water depth {} shallower than a platform", s.water_depth));
  }
  if (!(s.c > 0)) throw Error(Errc::InvalidScene, fmt::format("sound speed {}", s.c));
  if (s.geometry.element_count() == 0) throw Error(Errc::InvalidScene, "empty array geometry");
  const bool has_direct = std::any_of(s.paths.begin(), s.paths.end(),
                                      [](const PathSpec& p) { return p.kind == PathKind::direct; });
  if (!has_direct) throw Error(Errc::InvalidScene, "direct path missing");
  for (const auto& p : s.paths) {
    if (p.reflection_coeff < -1 || p.reflection_coeff > 1) {
      throw Error(Errc::InvalidScene, fmt::format("reflection coefficient {}", p.reflection_coeff));
    }
  }
  if (!(s.source_level > 0)) throw Error(Errc::InvalidScene, "source level must be positive");
}

namespace {

double image_depth(const SceneSpec& s, PathKind kind) {
  switch (kind) {
    case PathKind::direct: return s.beacon.depth;
    case PathKind::surface: return -s.beacon.depth;
    case PathKind::bottom: return 2 * s.water_depth - s.beacon.depth;
  }
  return s.beacon.depth;
}

double distance_from(const SceneSpec& s, double north, double east, double depth, PathKind kind) {
  const double dn = s.beacon.north - north;
  const double de = s.beacon.east - east;
  const double dz = image_depth(s, kind) - depth;
  return std::sqrt(dn * dn + de * de + dz * dz);
}

}  // namespace

double slant_range(const SceneSpec& s) {
  return distance_from(s, s.receiver.north, s.receiver.east, s.receiver.depth, PathKind::direct);
}

double absolute_bearing(const SceneSpec& s) {
  const double dn = s.beacon.north - s.receiver.north;
  const double de = s.beacon.east - s.receiver.east;
  return array::wrap360(array::rad2deg(std::atan2(de, dn)));
}

double relative_bearing(const SceneSpec& s) { return array::wrap360(absolute_bearing(s) - s.receiver_heading); }

std::vector<PathArrival> path_delays(const SceneSpec& s) {
  validate(s);
  const double psi = array::deg2rad(s.receiver_heading);
  const double cp = std::cos(psi);
  const double sp = std::sin(psi);
  // Body frame is x forward, y starboard, so the array's math-convention
  // angle coincides with the clockwise relative bearing.
  const auto plane_delays = array::steering_delays(s.geometry, relative_bearing(s), s.c);

  std::vector<PathArrival> out;
  for (const auto& path : s.paths) {
    PathArrival arr;
    arr.kind = path.kind;
    arr.path_length = distance_from(s, s.receiver.north, s.receiver.east, s.receiver.depth, path.kind);
    arr.amplitude = s.source_level * path.reflection_coeff / arr.path_length;
    arr.element_delays.reserve(s.geometry.element_count());
    for (std::size_t a = 0; a < s.geometry.element_count(); ++a) {
      if (s.mode == PropagationMode::planewave) {
        arr.element_delays.push_back(arr.path_length / s.c - plane_delays[a]);
      } else {
        const auto& p = s.geometry.positions[a];
        const double n = s.receiver.north + p.x * cp - p.y * sp;
        const double e = s.receiver.east + p.x * sp + p.y * cp;
        arr.element_delays.push_back(distance_from(s, n, e, s.receiver.depth, path.kind) / s.c);
      }
    }
    out.push_back(std::move(arr));
  }
  return out;
}

double noise_sigma(double signal_power, double snr_db, double bandwidth, double sample_rate) {
  // White noise of variance σ² puts σ²·2B/fs of its power inside the band.
  const double in_band_noise = signal_power / std::pow(10.0, snr_db / 10.0);
  return std::sqrt(in_band_noise * sample_rate / (2.0 * bandwidth));
}

MultichannelFrame synthesize_frame(const SceneSpec& scene, const waveform::ReferenceWaveform& ref,
                                   double timing_offset, const SynthesisOptions& options) {
  const auto arrivals = path_delays(scene);
  const double fs = ref.sample_rate;
  const std::size_t n = ref.length();
  const std::size_t m = options.frame_length;
  const std::size_t elements = scene.geometry.element_count();

  double min_delay = INFINITY;
  double max_delay = -INFINITY;
  for (const auto& arr : arrivals) {
    for (double d : arr.element_delays) {
      min_delay = std::min(min_delay, (d + timing_offset) * fs);
      max_delay = std::max(max_delay, (d + timing_offset) * fs);
    }
  }
  if (min_delay < 0) {
    throw Error(Errc::FrameTooShort, fmt::format("arrival {:.1f} samples before the trigger", -min_delay));
  }
  if (static_cast<double>(n) + max_delay > static_cast<double>(m)) {
    throw Error(Errc::FrameTooShort,
                fmt::format("frame of {} samples cannot hold a {}-sample pulse delayed {:.1f} samples", m, n,
                            max_delay));
  }

  MultichannelFrame frame;
  frame.sample_rate = fs;
  frame.gain_db = options.gain_db;
  frame.source = FrameSource::simulated;
  frame.trigger_epoch_ns = options.epoch_base_ns + static_cast<std::uint64_t>(std::llround(options.elapsed * 1e9));

  const std::size_t len = fft::next_pow2(m + n);
  const auto x = fft::forward(ref.samples, len);
  const double gain = std::pow(10.0, options.gain_db / 20.0);

  for (std::size_t a = 0; a < elements; ++a) {
    std::vector<fft::Complex> y(x.size());
    for (const auto& arr : arrivals) {
      const double shift = (arr.element_delays[a] + timing_offset) * fs;
      const fft::Complex rotation = std::polar(1.0, -2 * pi * shift / static_cast<double>(len));
      fft::Complex phasor = arr.amplitude;
      for (std::size_t k = 0; k < x.size(); ++k) {
        y[k] += x[k] * phasor;
        phasor *= rotation;
        // keep the recurrence on the circle
        if ((k & 1023) == 1023) phasor = std::polar(arr.amplitude, std::arg(phasor));
      }
    }
    // a fractional delay has no real-valued Nyquist term
    y.back() = 0.0;
    auto ch = fft::inverse(y, len);
    ch.resize(m);
    frame.channels.push_back(std::move(ch));
  }

  if (scene.snr_db) {
    const auto direct = std::find_if(arrivals.begin(), arrivals.end(),
                                     [](const PathArrival& p) { return p.kind == PathKind::direct; });
    const double signal_power = direct->amplitude * direct->amplitude * ref.energy() / static_cast<double>(n);
    const double bandwidth = std::max(ref.f_stop - ref.f_start, 1.0 / ref.duration);
    const double sigma = noise_sigma(signal_power, *scene.snr_db, bandwidth, fs);
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (auto& ch : frame.channels) {
      for (double& v : ch) v += normal(rng);
    }
  }
  if (gain != 1.0) {
    for (auto& ch : frame.channels) {
      for (double& v : ch) v *= gain;
    }
  }
  return frame;
}

MultichannelFrame synthesize_frame(const SceneSpec& scene, const waveform::ReferenceWaveform& ref,
                                   const ClockPair& clocks, const SynthesisOptions& options) {
  const double offset = clock::clock_offset_at(clocks.receiver, options.elapsed) -
                        clock::clock_offset_at(clocks.beacon, options.elapsed);
  return synthesize_frame(scene, ref, offset, options);
}

}  // namespace r2usbl::chansim
