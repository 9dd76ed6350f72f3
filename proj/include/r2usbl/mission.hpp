#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "r2usbl/chansim.hpp"
#include "r2usbl/config.hpp"
#include "r2usbl/fix.hpp"
#include "r2usbl/pipeline.hpp"
#include "r2usbl/publisher.hpp"

namespace r2usbl::mission {

/// Receiver pose at a mission time; poses between waypoints are linear.
struct Waypoint {
  double time = 0.0;  // s since mission start
  double north = 0.0;
  double east = 0.0;
  double depth = 0.0;
  double heading = 0.0;  // deg
};

/// Scene file contents. Array geometry and sound speed come from the config.
///
///   scene:
///     mode: spherical          # or planewave
///     water_depth: 100
///     snr_db: 20               # omit for noiseless
///     source_level: 1
///     paths: [direct, surface] # or {kind, reflection_coeff} entries
///     beacon: {north: 40, east: 10, depth: 5}
///   pings: 20
///   waypoints:
///     - {time: 0, north: 0, east: 0, depth: 2, heading: 0}
struct Scene {
  chansim::NedPosition beacon;
  std::vector<chansim::PathSpec> paths{chansim::default_path(chansim::PathKind::direct)};
  chansim::PropagationMode mode = chansim::PropagationMode::spherical;
  double water_depth = 100.0;
  std::optional<double> snr_db;
  double source_level = 1.0;
  std::size_t pings = 10;
  std::vector<Waypoint> waypoints{Waypoint{}};
};

Scene parse_scene(std::string_view text);
Scene load_scene(const std::string& path);

/// Interpolated receiver pose; clamps outside the waypoint span.
Waypoint pose_at(const Scene& scene, double t);

/// Full simulator scene at mission time t.
chansim::SceneSpec scene_at(const Scene& scene, const pipeline::PipelineSettings& settings, double t);

struct PingRecord {
  std::size_t ping = 0;
  double elapsed = 0.0;
  pipeline::PingResult result;
  std::optional<fix::NorthEast> truth;
  std::optional<double> true_slant_range;
  double processing_s = 0.0;
};

struct RunOptions {
  std::optional<std::size_t> pings;   // simulate: overrides the scene count
  bool emit_csv = false;              // CSV rows instead of sentences on `out`
  std::ostream* out = nullptr;
  io::FixPublisher* publisher = nullptr;
  bool write_logs = true;
};

struct MissionSummary {
  std::size_t frames = 0;
  std::size_t fixes = 0;
  std::size_t failures = 0;
  std::size_t overruns = 0;        // pings that took longer than the interval
  std::size_t dropped_frames = 0;  // frames rejected by a full queue
  std::vector<PingRecord> records;
  std::optional<fix::ErrorMetrics> metrics;  // against scene truth, simulate only
};

inline constexpr std::size_t kQueueDepth = 2;

/// Scene-driven closed loop: synthesized frames carry the gain commanded by
/// the previous ping.
MissionSummary run_simulation(const config::Config& config, const Scene& scene, const RunOptions& options);

/// Recorded RawFrameRecord files, processed in order without drops.
MissionSummary run_replay(const config::Config& config, const std::vector<std::string>& files,
                          const RunOptions& options);

/// Live record stream; frames arriving while the queue is full are dropped.
MissionSummary run_receive(const config::Config& config, std::istream& in, const RunOptions& options);

/// Beacon side: writes the reference waveform to <log_dir>/reference_waveform.csv
/// and prints the transmit schedule for `pings` PPS edges.
void run_beacon(const config::Config& config, std::size_t pings, std::ostream& out);

}  // namespace r2usbl::mission
