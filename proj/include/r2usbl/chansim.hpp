#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "r2usbl/array.hpp"
#include "r2usbl/clock.hpp"
#include "r2usbl/frame.hpp"
#include "r2usbl/waveform.hpp"

namespace r2usbl::chansim {

/// Local north/east/depth coordinates, metres; depth positive down.
struct NedPosition {
  double north = 0.0;
  double east = 0.0;
  double depth = 0.0;
};

enum class PathKind { direct, surface, bottom };

struct PathSpec {
  PathKind kind = PathKind::direct;
  double reflection_coeff = 1.0;
};

/// Default reflection coefficients: pressure-release surface, soft bottom.
PathSpec default_path(PathKind kind);

enum class PropagationMode { spherical, planewave };

struct SceneSpec {
  NedPosition beacon;
  NedPosition receiver;
  double receiver_heading = 0.0;  // deg, clockwise from north
  array::ArrayGeometry geometry;
  double c = 1500.0;
  std::vector<PathSpec> paths{PathSpec{}};
  double water_depth = 100.0;
  std::optional<double> snr_db;  // in-band SNR of the direct arrival; none = noiseless
  PropagationMode mode = PropagationMode::spherical;
  double source_level = 1.0;  // amplitude at 1 m
};

struct PathArrival {
  PathKind kind = PathKind::direct;
  double path_length = 0.0;             // to the array centre, m
  double amplitude = 0.0;               // source_level·coeff/path_length
  std::vector<double> element_delays;  // s, one per element
};

void validate(const SceneSpec& scene);

/// Image-method arrivals for every configured path.
std::vector<PathArrival> path_delays(const SceneSpec& scene);

/// Direct 3D distance from beacon to array centre.
double slant_range(const SceneSpec& scene);
/// Horizontal bearing of the beacon relative to the bow, clockwise, [0, 360).
double relative_bearing(const SceneSpec& scene);
/// Absolute bearing of the beacon from the receiver, clockwise from north.
double absolute_bearing(const SceneSpec& scene);

struct SynthesisOptions {
  std::size_t frame_length = 48000;
  double elapsed = 0.0;  // true time of the ping since mission start, s
  std::uint64_t seed = 0;
  double gain_db = 0.0;
  std::uint64_t epoch_base_ns = 0;
};

/// Synthesizes one frame. `timing_offset` is receiver-minus-beacon clock
/// offset (s) and shifts every arrival by that amount.
MultichannelFrame synthesize_frame(const SceneSpec& scene, const waveform::ReferenceWaveform& ref,
                                   double timing_offset, const SynthesisOptions& options);

struct ClockPair {
  clock::ClockModel beacon;
  clock::ClockModel receiver;
};

MultichannelFrame synthesize_frame(const SceneSpec& scene, const waveform::ReferenceWaveform& ref,
                                   const ClockPair& clocks, const SynthesisOptions& options);

/// Standard deviation of white noise giving `snr_db` in-band against a
/// signal of mean power `signal_power` spread over `bandwidth` Hz.
double noise_sigma(double signal_power, double snr_db, double bandwidth, double sample_rate);

}  // namespace r2usbl::chansim
