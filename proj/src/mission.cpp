#include "r2usbl/mission.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>
#include <yaml-cpp/yaml.h>

#include "r2usbl/bounded_queue.hpp"
#include "r2usbl/clock.hpp"
#include "r2usbl/error.hpp"
#include "r2usbl/raw_frame.hpp"
#include "r2usbl/sentence.hpp"
#include "yaml_read.hpp"

namespace r2usbl::mission {

using config::ConfigError;

namespace {

using namespace config::yaml_read;

chansim::PathKind parse_kind(const YAML::Node& n, const std::string& key) {
  const auto s = scalar<std::string>(n, key, "direct, surface or bottom");
  if (s == "direct") return chansim::PathKind::direct;
  if (s == "surface") return chansim::PathKind::surface;
  if (s == "bottom") return chansim::PathKind::bottom;
  throw ConfigError(Errc::ValidationError, key, fmt::format("unknown path '{}'", s), line_of(n));
}

}  // namespace

Scene parse_scene(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(Errc::ParseError, "<scene>", e.msg, e.mark.line + 1);
  }
  if (!root.IsDefined() || root.IsNull()) throw ConfigError(Errc::ValidationError, "<scene>", "empty scene");
  check_map(root, "", {"scene", "pings", "waypoints"});

  Scene sc;
  const auto s = root["scene"];
  if (!s) throw ConfigError(Errc::ValidationError, "scene", "required");
  check_map(s, "scene", {"mode", "water_depth", "snr_db", "source_level", "paths", "beacon"});
  if (const auto m = s["mode"]) {
    const auto v = scalar<std::string>(m, "scene.mode", "spherical or planewave");
    if (v == "spherical") {
      sc.mode = chansim::PropagationMode::spherical;
    } else if (v == "planewave") {
      sc.mode = chansim::PropagationMode::planewave;
    } else {
      throw ConfigError(Errc::ValidationError, "scene.mode", fmt::format("unknown mode '{}'", v), line_of(m));
    }
  }
  read(s, "water_depth", "scene", sc.water_depth);
  read(s, "snr_db", "scene", sc.snr_db);
  read(s, "source_level", "scene", sc.source_level);
  if (const auto p = s["paths"]) {
    if (!p.IsSequence()) throw ConfigError(Errc::ValidationError, "scene.paths", "expected a list", line_of(p));
    sc.paths.clear();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto key = fmt::format("scene.paths[{}]", i);
      const auto e = p[i];
      if (e.IsScalar()) {
        sc.paths.push_back(chansim::default_path(parse_kind(e, key)));
      } else {
        check_map(e, key, {"kind", "reflection_coeff"});
        if (!e["kind"]) throw ConfigError(Errc::ValidationError, key + ".kind", "required", line_of(e));
        auto path = chansim::default_path(parse_kind(e["kind"], key + ".kind"));
        read(e, "reflection_coeff", key, path.reflection_coeff);
        sc.paths.push_back(path);
      }
    }
  }
  const auto b = s["beacon"];
  if (!b) throw ConfigError(Errc::ValidationError, "scene.beacon", "required");
  check_map(b, "scene.beacon", {"north", "east", "depth"});
  read(b, "north", "scene.beacon", sc.beacon.north);
  read(b, "east", "scene.beacon", sc.beacon.east);
  read(b, "depth", "scene.beacon", sc.beacon.depth);

  read(root, "pings", "", sc.pings);
  if (const auto w = root["waypoints"]) {
    if (!w.IsSequence() || w.size() == 0) {
      throw ConfigError(Errc::ValidationError, "waypoints", "expected a non-empty list", line_of(w));
    }
    sc.waypoints.clear();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const auto key = fmt::format("waypoints[{}]", i);
      check_map(w[i], key, {"time", "north", "east", "depth", "heading"});
      Waypoint wp;
      read(w[i], "time", key, wp.time);
      read(w[i], "north", key, wp.north);
      read(w[i], "east", key, wp.east);
      read(w[i], "depth", key, wp.depth);
      read(w[i], "heading", key, wp.heading);
      if (!sc.waypoints.empty() && !(wp.time > sc.waypoints.back().time)) {
        throw ConfigError(Errc::ValidationError, key + ".time", "waypoint times must increase", line_of(w[i]));
      }
      sc.waypoints.push_back(wp);
    }
  }
  if (sc.pings == 0) throw ConfigError(Errc::ValidationError, "pings", "must be at least 1");
  return sc;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, fmt::format("cannot open scene file {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

Waypoint pose_at(const Scene& scene, double t) {
  const auto& w = scene.waypoints;
  if (w.empty()) return Waypoint{t};
  if (t <= w.front().time) return Waypoint{t, w.front().north, w.front().east, w.front().depth, w.front().heading};
  if (t >= w.back().time) return Waypoint{t, w.back().north, w.back().east, w.back().depth, w.back().heading};
  const auto hi = std::upper_bound(w.begin(), w.end(), t, [](double v, const Waypoint& p) { return v < p.time; });
  const auto& a = *(hi - 1);
  const auto& b = *hi;
  const double u = (t - a.time) / (b.time - a.time);
  // heading takes the short way round
  double dh = std::fmod(b.heading - a.heading, 360.0);
  if (dh > 180.0) dh -= 360.0;
  if (dh < -180.0) dh += 360.0;
  return Waypoint{t, a.north + u * (b.north - a.north), a.east + u * (b.east - a.east),
                  a.depth + u * (b.depth - a.depth), array::wrap360(a.heading + u * dh)};
}

chansim::SceneSpec scene_at(const Scene& scene, const pipeline::PipelineSettings& settings, double t) {
  const auto pose = pose_at(scene, t);
  chansim::SceneSpec s;
  s.beacon = scene.beacon;
  s.receiver = {pose.north, pose.east, pose.depth};
  s.receiver_heading = pose.heading;
  s.geometry = settings.geometry;
  s.c = settings.sound_speed;
  s.paths = scene.paths;
  s.water_depth = scene.water_depth;
  s.snr_db = scene.snr_db;
  s.mode = scene.mode;
  s.source_level = scene.source_level;
  return s;
}

namespace {

struct Job {
  MultichannelFrame frame;
  pipeline::Navigation nav;
  std::optional<fix::NorthEast> truth;
  std::optional<double> true_slant_range;
  std::size_t ping = 0;
  double elapsed = 0.0;
  std::string error;  // the producer could not build this frame
};

using JobQueue = io::BoundedQueue<Job>;

constexpr std::string_view kFixHeader =
    "ping,trigger_epoch_ns,status,tof_s,slant_range_m,horizontal_range_m,relative_bearing_deg,absolute_bearing_deg,"
    "north_m,east_m,gain_db,agc_command,snr_db,quality,true_north_m,true_east_m";

void write_fix_row(std::ostream& out, const PingRecord& r, std::uint64_t epoch) {
  const auto& res = r.result;
  std::string truth = ",";
  if (r.truth) truth = fmt::format("{:.4f},{:.4f}", r.truth->north, r.truth->east);
  if (res.fix) {
    const auto& f = *res.fix;
    fmt::print(out, "{},{},ok,{:.9f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{},{},{:.2f},{},{}\n", r.ping, epoch,
               f.tof, f.slant_range, f.horizontal_range, f.relative_bearing, f.absolute_bearing, f.north, f.east,
               f.gain_db, agc::to_string(res.agc.command), f.snr_db, fix::to_string(f.quality), truth);
  } else {
    std::string why = res.failure;
    std::replace(why.begin(), why.end(), '"', '\'');
    fmt::print(out, "{},{},\"{}\",,,,,,,,{},{},,,{}\n", r.ping, epoch, why, res.agc.state.gain_db,
               agc::to_string(res.agc.command), truth);
  }
}

/// The four log artifacts plus optional raw frames.
class MissionLog {
 public:
  MissionLog(const config::Config& cfg, bool simulated) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.log_dir, ec);
    if (ec) throw Error(Errc::IoError, fmt::format("cannot create log directory {}: {}", cfg.log_dir, ec.message()));
    const fs::path dir(cfg.log_dir);
    open(fixes_, dir / "fixes.csv");
    open(sentences_, dir / "fixes.nmea");
    open(peaks_, dir / "correlation_peaks.csv");
    open(patterns_, dir / "beam_patterns.csv");
    fixes_ << kFixHeader << '\n';
    peaks_ << "ping,channel,peak_index,peak_value,normalized_peak,snr_db\n";
    patterns_ << "ping,angle_deg,power\n";
    if (cfg.log_raw_frames) {
      raw_format_ = cfg.raw_format.value_or(simulated ? rawframe::SampleFormat::float32
                                                      : rawframe::SampleFormat::int16);
      raw_.emplace();
      raw_->open(dir / "raw_frames.r2ub", std::ios::binary);
      if (!*raw_) throw Error(Errc::IoError, "cannot open raw frame log");
    }
  }

  void record(const Job& job, const PingRecord& r, const std::string& sentence) {
    write_fix_row(fixes_, r, job.frame.trigger_epoch_ns);
    if (!sentence.empty()) sentences_ << sentence;
    const auto& res = r.result;
    for (std::size_t c = 0; c < res.peak_index.size(); ++c) {
      fmt::print(peaks_, "{},{},{},{:.9g},{:.6f},{:.2f}\n", r.ping, c, res.peak_index[c], res.peak_value[c],
                 res.normalized_peak[c], c < res.snr_db.size() ? res.snr_db[c] : 0.0);
    }
    if (res.pattern) {
      for (std::size_t i = 0; i < res.pattern->angles.size(); ++i) {
        fmt::print(patterns_, "{},{:.3f},{:.9g}\n", r.ping, res.pattern->angles[i], res.pattern->powers[i]);
      }
    }
    if (raw_ && !job.frame.channels.empty()) rawframe::write_frame(*raw_, job.frame, raw_format_);
  }

  void flush() {
    for (auto* s : {&fixes_, &sentences_, &peaks_, &patterns_}) s->flush();
    if (raw_) raw_->flush();
    const bool bad = !fixes_ || !sentences_ || !peaks_ || !patterns_ || (raw_ && !*raw_);
    if (bad) throw Error(Errc::IoError, "failed writing mission logs");
  }

 private:
  static void open(std::ofstream& f, const std::filesystem::path& p) {
    f.open(p);
    if (!f) throw Error(Errc::IoError, fmt::format("cannot open {}", p.string()));
  }

  std::ofstream fixes_;
  std::ofstream sentences_;
  std::ofstream peaks_;
  std::ofstream patterns_;
  std::optional<std::ofstream> raw_;
  rawframe::SampleFormat raw_format_ = rawframe::SampleFormat::int16;
};

/// Gain commanded by ping k, handed to the producer synthesizing ping k+1.
class GainLoop {
 public:
  explicit GainLoop(double initial) { gains_.push_back(initial); }

  void post(double gain) {
    std::lock_guard lock(mutex_);
    gains_.push_back(gain);
    cv_.notify_all();
  }

  std::optional<double> wait(std::size_t ping) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return stopped_ || gains_.size() > ping; });
    if (gains_.size() > ping) return gains_[ping];
    return std::nullopt;
  }

  void stop() {
    std::lock_guard lock(mutex_);
    stopped_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<double> gains_;
  bool stopped_ = false;
};

/// Single consumer shared by every mode.
MissionSummary consume(JobQueue& queue, const config::Config& cfg, const RunOptions& options, bool simulated,
                       GainLoop* gain_loop) {
  const pipeline::Pipeline pipe(pipeline::make_settings(cfg));
  std::optional<MissionLog> log;
  if (options.write_logs) log.emplace(cfg, simulated);
  if (options.out && options.emit_csv) *options.out << kFixHeader << '\n';

  MissionSummary summary;
  std::vector<fix::NorthEast> est;
  std::vector<fix::NorthEast> truth;
  while (auto job = queue.pop()) {
    PingRecord rec;
    rec.ping = job->ping;
    rec.elapsed = job->elapsed;
    rec.truth = job->truth;
    rec.true_slant_range = job->true_slant_range;
    const auto t0 = std::chrono::steady_clock::now();
    if (!job->error.empty()) {
      rec.result.failure = job->error;
      rec.result.agc.state = cfg.agc;
    } else {
      ++summary.frames;
      agc::AgcState state = cfg.agc;
      state.gain_db = std::clamp(job->frame.gain_db, state.min_gain_db, state.max_gain_db);
      try {
        rec.result = pipe.process(job->frame, job->nav, state);
      } catch (const Error& e) {
        rec.result.failure = e.what();
        rec.result.agc.state = state;
      }
    }
    rec.processing_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (gain_loop) gain_loop->post(rec.result.agc.state.gain_db);
    if (rec.processing_s > cfg.ping_interval) {
      ++summary.overruns;
      spdlog::warn("ping {} overran the {:.3f} s interval ({:.3f} s)", rec.ping, cfg.ping_interval,
                       rec.processing_s);
    }

    std::string line;
    if (rec.result.fix) {
      ++summary.fixes;
      line = sentence::format_fix_sentence(*rec.result.fix);
      if (options.publisher) options.publisher->publish(line);
      if (rec.truth) {
        est.push_back({rec.result.fix->north, rec.result.fix->east});
        truth.push_back(*rec.truth);
      }
    } else {
      ++summary.failures;
      spdlog::warn("ping {}: no fix ({})", rec.ping, rec.result.failure);
    }
    if (options.out) {
      if (options.emit_csv) {
        write_fix_row(*options.out, rec, job->frame.trigger_epoch_ns);
      } else {
        *options.out << line;
      }
    }
    if (log) log->record(*job, rec, line);
    summary.records.push_back(std::move(rec));
  }
  if (log) log->flush();
  if (!est.empty()) summary.metrics = fix::rmse(est, truth);
  return summary;
}

/// Runs `produce` on its own thread against the consumer on this one.
template <typename Producer>
MissionSummary run_pipeline(const config::Config& cfg, const RunOptions& options, bool simulated,
                            GainLoop* gain_loop, Producer produce) {
  JobQueue queue(kQueueDepth);
  std::exception_ptr producer_error;
  std::size_t dropped = 0;
  std::thread producer([&] {
    try {
      dropped = produce(queue);
    } catch (...) {
      producer_error = std::current_exception();
    }
    queue.close();
  });
  MissionSummary summary;
  try {
    summary = consume(queue, cfg, options, simulated, gain_loop);
  } catch (...) {
    queue.close();
    if (gain_loop) gain_loop->stop();
    producer.join();
    throw;
  }
  producer.join();
  if (producer_error) std::rethrow_exception(producer_error);
  summary.dropped_frames = dropped;
  return summary;
}

double clock_correction(const config::Config& cfg, double elapsed) {
  return cfg.clocks.correction.offset + cfg.clocks.correction.rate * elapsed;
}

pipeline::Navigation configured_navigation(const config::Config& cfg, double elapsed) {
  pipeline::Navigation nav;
  nav.heading = cfg.navigation.heading;
  nav.receiver = {cfg.navigation.north, cfg.navigation.east};
  nav.depth_difference = cfg.navigation.depth_difference;
  nav.clock_correction = clock_correction(cfg, elapsed);
  return nav;
}

std::uint64_t ping_seed(std::uint64_t seed, std::size_t ping) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(ping)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

MissionSummary run_simulation(const config::Config& cfg, const Scene& scene, const RunOptions& options) {
  const auto settings = pipeline::make_settings(cfg);
  const std::size_t pings = options.pings.value_or(scene.pings);
  GainLoop gains(cfg.agc.gain_db);

  auto produce = [&](JobQueue& queue) -> std::size_t {
    clock::ClockRealization beacon_clock(cfg.clocks.beacon, ping_seed(cfg.seed, 0xbeac0));
    clock::ClockRealization receiver_clock(cfg.clocks.receiver, ping_seed(cfg.seed, 0x5ec));
    for (std::size_t k = 0; k < pings; ++k) {
      const auto gain = gains.wait(k);
      if (!gain) break;
      Job job;
      job.ping = k;
      job.elapsed = static_cast<double>(k) * cfg.ping_interval;
      const auto spec = scene_at(scene, settings, job.elapsed);
      const auto pose = pose_at(scene, job.elapsed);
      job.nav.heading = pose.heading;
      job.nav.receiver = {pose.north, pose.east};
      job.nav.depth_difference = scene.beacon.depth - pose.depth;
      job.nav.clock_correction = clock_correction(cfg, job.elapsed);
      job.truth = fix::NorthEast{scene.beacon.north, scene.beacon.east};
      const double offset = receiver_clock.offset_at(job.elapsed) - beacon_clock.offset_at(job.elapsed);
      chansim::SynthesisOptions synth;
      synth.frame_length = cfg.frame_length();
      synth.elapsed = job.elapsed;
      synth.seed = ping_seed(cfg.seed, k);
      synth.gain_db = *gain;
      try {
        job.true_slant_range = chansim::slant_range(spec);
        job.frame = chansim::synthesize_frame(spec, settings.reference, offset, synth);
      } catch (const Error& e) {
        job.error = e.what();
        job.frame.trigger_epoch_ns = static_cast<std::uint64_t>(std::llround(job.elapsed * 1e9));
      }
      if (!queue.push(std::move(job))) break;
    }
    return 0;
  };
  return run_pipeline(cfg, options, true, &gains, produce);
}

MissionSummary run_replay(const config::Config& cfg, const std::vector<std::string>& files,
                          const RunOptions& options) {
  for (const auto& f : files) {
    if (!std::filesystem::exists(f)) throw Error(Errc::IoError, fmt::format("no such file {}", f));
  }
  auto produce = [&](JobQueue& queue) -> std::size_t {
    std::size_t ping = 0;
    std::optional<std::uint64_t> first_epoch;
    for (const auto& path : files) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw Error(Errc::IoError, fmt::format("cannot open {}", path));
      while (auto frame = rawframe::read_frame(in)) {
        Job job;
        job.ping = ping++;
        frame->source = FrameSource::replayed;
        if (!first_epoch) first_epoch = frame->trigger_epoch_ns;
        job.elapsed = static_cast<double>(frame->trigger_epoch_ns - std::min(*first_epoch, frame->trigger_epoch_ns)) * 1e-9;
        job.nav = configured_navigation(cfg, job.elapsed);
        job.frame = std::move(*frame);
        if (!queue.push(std::move(job))) return 0;
      }
    }
    return 0;
  };
  return run_pipeline(cfg, options, false, nullptr, produce);
}

MissionSummary run_receive(const config::Config& cfg, std::istream& in, const RunOptions& options) {
  auto produce = [&](JobQueue& queue) -> std::size_t {
    std::size_t ping = 0;
    std::size_t dropped = 0;
    std::optional<std::uint64_t> first_epoch;
    while (auto frame = rawframe::read_frame(in)) {
      Job job;
      job.ping = ping++;
      frame->source = FrameSource::live;
      if (!first_epoch) first_epoch = frame->trigger_epoch_ns;
      job.elapsed = static_cast<double>(frame->trigger_epoch_ns - std::min(*first_epoch, frame->trigger_epoch_ns)) * 1e-9;
      job.nav = configured_navigation(cfg, job.elapsed);
      job.frame = std::move(*frame);
      if (!queue.try_push(std::move(job))) {
        ++dropped;
        spdlog::warn("ping {} dropped: processing queue full", ping - 1);
      }
    }
    return dropped;
  };
  return run_pipeline(cfg, options, false, nullptr, produce);
}

void run_beacon(const config::Config& cfg, std::size_t pings, std::ostream& out) {
  const auto ref = waveform::generate_lfm(cfg.chirp.f_start, cfg.chirp.f_stop, cfg.chirp.duration, cfg.sample_rate,
                                          cfg.chirp.window);
  std::error_code ec;
  std::filesystem::create_directories(cfg.log_dir, ec);
  if (ec) throw Error(Errc::IoError, fmt::format("cannot create log directory {}: {}", cfg.log_dir, ec.message()));
  const auto path = std::filesystem::path(cfg.log_dir) / "reference_waveform.csv";
  std::ofstream wf(path);
  if (!wf) throw Error(Errc::IoError, fmt::format("cannot open {}", path.string()));
  wf << "time_s,sample\n";
  for (std::size_t n = 0; n < ref.length(); ++n) {
    fmt::print(wf, "{:.9f},{:.9f}\n", static_cast<double>(n) / ref.sample_rate, ref.samples[n]);
  }
  if (!wf.flush()) throw Error(Errc::IoError, fmt::format("failed writing {}", path.string()));

  fmt::print(out, "# {} samples, {:.0f}-{:.0f} Hz over {} s; waveform in {}\n", ref.length(), ref.f_start,
             ref.f_stop, ref.duration, path.string());
  fmt::print(out, "ping,true_time_s,local_time_s,clock_offset_s\n");
  const auto& m = cfg.clocks.beacon;
  for (std::size_t k = 0; k < pings; ++k) {
    // transmit when the local clock reads k·interval
    const double local = static_cast<double>(k) * cfg.ping_interval;
    const double t = (local - m.initial_offset) / (1.0 + m.drift_rate);
    fmt::print(out, "{},{:.9f},{:.9f},{:.3e}\n", k, t, local, clock::clock_offset_at(m, t));
  }
}

}  // namespace r2usbl::mission
