// r2usbl command-line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 no valid fix.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "r2usbl/config.hpp"
#include "r2usbl/error.hpp"
#include "r2usbl/mission.hpp"
#include "r2usbl/publisher.hpp"
#include "r2usbl/sweep.hpp"

namespace {

using namespace r2usbl;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoFix = 4;

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> log_dir;
  bool emit_csv = false;
  std::string scene_path;
  std::optional<std::size_t> pings;
  std::string input = "-";
  std::vector<std::string> files;
};

config::Config load(const Flags& flags, config::Mode mode) {
  auto cfg = config::load_config(flags.config_path);
  if (cfg.mode != mode) {
    spdlog::info("config mode '{}' overridden by subcommand '{}'", config::to_string(cfg.mode),
                 config::to_string(mode));
    cfg.mode = mode;
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.log_dir) cfg.log_dir = *flags.log_dir;
  return cfg;
}

std::unique_ptr<io::FixPublisher> make_publisher(const config::Config& cfg) {
  if (cfg.output.tcp_port) {
    auto p = std::make_unique<io::TcpPublisher>(*cfg.output.tcp_port);
    spdlog::info("publishing fixes on tcp port {}", p->port());
    return p;
  }
  if (cfg.output.serial_path) return std::make_unique<io::SerialPublisher>(*cfg.output.serial_path);
  return nullptr;
}

int report(const mission::MissionSummary& s) {
  spdlog::info("{} frames, {} fixes, {} without fix, {} overruns, {} dropped", s.frames, s.fixes, s.failures,
               s.overruns, s.dropped_frames);
  if (s.metrics) {
    spdlog::info("rmse north {:.3f} m, east {:.3f} m, horizontal {:.3f} m over {} fixes", s.metrics->rmse_north,
                 s.metrics->rmse_east, s.metrics->rmse_horizontal, s.metrics->sample_count);
  }
  return s.fixes == 0 ? kExitNoFix : 0;
}

mission::RunOptions run_options(const Flags& flags, io::FixPublisher* publisher) {
  mission::RunOptions o;
  o.emit_csv = flags.emit_csv;
  o.out = &std::cout;
  o.publisher = publisher;
  return o;
}

int cmd_beacon(const Flags& flags) {
  const auto cfg = load(flags, config::Mode::beacon);
  mission::run_beacon(cfg, flags.pings.value_or(10), std::cout);
  return 0;
}

int cmd_simulate(const Flags& flags) {
  const auto cfg = load(flags, config::Mode::simulate);
  const auto scene = mission::load_scene(flags.scene_path);
  auto publisher = make_publisher(cfg);
  auto opts = run_options(flags, publisher.get());
  opts.pings = flags.pings;
  return report(mission::run_simulation(cfg, scene, opts));
}

int cmd_replay(const Flags& flags) {
  const auto cfg = load(flags, config::Mode::replay);
  auto publisher = make_publisher(cfg);
  return report(mission::run_replay(cfg, flags.files, run_options(flags, publisher.get())));
}

int cmd_receive(const Flags& flags) {
  const auto cfg = load(flags, config::Mode::receiver);
  auto publisher = make_publisher(cfg);
  const auto opts = run_options(flags, publisher.get());
  if (flags.input == "-") return report(mission::run_receive(cfg, std::cin, opts));
  std::ifstream in(flags.input, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + flags.input);
  return report(mission::run_receive(cfg, in, opts));
}

int cmd_sweep(const Flags& flags) {
  const auto cfg = load(flags, config::Mode::sweep);
  const auto rep = sweep::run_sweep(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.log_dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + cfg.log_dir);
  const auto path = std::filesystem::path(cfg.log_dir) / "sweep.csv";
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string());
  sweep::write_sweep_csv(rep, out);
  if (!out.flush()) throw Error(Errc::IoError, "failed writing " + path.string());
  if (flags.emit_csv) sweep::write_sweep_csv(rep, std::cout);
  spdlog::info("{} cells, {} failed; max range error {:.3e} of slant, max bearing error {:.4f} deg; report {}",
               rep.rows.size(), rep.failures, rep.max_relative_range_error, rep.max_abs_bearing_error,
               path.string());
  return rep.failures == rep.rows.size() ? kExitNoFix : 0;
}

bool is_io(Errc c) {
  switch (c) {
    case Errc::IoError:
    case Errc::BadMagic:
    case Errc::UnsupportedVersion:
    case Errc::TruncatedPayload:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  // stdout carries fixes; diagnostics go to stderr
  spdlog::set_default_logger(spdlog::stderr_color_st("r2usbl"));
  spdlog::set_pattern("r2usbl %l: %v");
  CLI::App app{"Passive inverted USBL positioning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--config", flags.config_path, "YAML configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "override the configured RNG seed");
  app.add_option("--log-dir", flags.log_dir, "override the configured log directory");
  app.add_flag("--emit-csv", flags.emit_csv, "write CSV rows to stdout instead of sentences");

  auto* beacon = app.add_subcommand("beacon", "write the reference chirp and print the transmit schedule");
  beacon->add_option("--pings", flags.pings, "schedule length");

  auto* receive = app.add_subcommand("receive", "process raw frame records arriving on a stream");
  receive->add_option("--input", flags.input, "record stream, '-' for stdin");

  auto* simulate = app.add_subcommand("simulate", "closed-loop mission over a simulated scene");
  simulate->add_option("--scene", flags.scene_path, "scene file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--pings", flags.pings, "override the scene's ping count");

  auto* replay = app.add_subcommand("replay", "process recorded raw frame files");
  replay->add_option("files", flags.files, "raw frame files")->required();

  auto* sweep = app.add_subcommand("sweep", "range/bearing grid accuracy scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*beacon) return cmd_beacon(flags);
    if (*receive) return cmd_receive(flags);
    if (*simulate) return cmd_simulate(flags);
    if (*replay) return cmd_replay(flags);
    if (*sweep) return cmd_sweep(flags);
  } catch (const config::ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return is_io(e.code()) ? kExitIo : 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
