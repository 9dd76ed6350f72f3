#include "r2usbl/sweep.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "r2usbl/chansim.hpp"
#include "r2usbl/error.hpp"
#include "r2usbl/pipeline.hpp"

namespace r2usbl::sweep {

double angle_difference(double a, double b) {
  double d = std::fmod(a - b, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

SweepReport run_sweep(const config::Config& cfg) {
  if (cfg.mode != config::Mode::sweep) {
    throw config::ConfigError(Errc::ValidationError, "mode", "run_sweep needs mode: sweep");
  }
  const pipeline::Pipeline pipe(pipeline::make_settings(cfg));
  const auto& settings = pipe.settings();

  const auto range_count =
      static_cast<std::size_t>(std::floor((cfg.sweep.range_max - cfg.sweep.range_min) / cfg.sweep.range_step + 1e-9)) + 1;
  const auto bearing_count = static_cast<std::size_t>(std::llround(360.0 / cfg.sweep.bearing_step));

  chansim::SceneSpec scene;
  scene.geometry = settings.geometry;
  scene.c = settings.sound_speed;
  scene.mode = cfg.sweep.propagation;
  scene.receiver = {0.0, 0.0, cfg.sweep.depth};
  scene.receiver_heading = 0.0;
  scene.water_depth = cfg.sweep.depth + 100.0;

  chansim::SynthesisOptions synth;
  synth.frame_length = cfg.frame_length();

  SweepReport report;
  std::vector<fix::NorthEast> est;
  std::vector<fix::NorthEast> truth;
  double sum_range_sq = 0.0;
  double sum_bearing_sq = 0.0;

  for (std::size_t ri = 0; ri < range_count; ++ri) {
    const double range = cfg.sweep.range_min + static_cast<double>(ri) * cfg.sweep.range_step;
    for (std::size_t bi = 0; bi < bearing_count; ++bi) {
      const double bearing = static_cast<double>(bi) * cfg.sweep.bearing_step;
      const double az = array::deg2rad(bearing);
      scene.beacon = {range * std::cos(az), range * std::sin(az), cfg.sweep.depth};

      SweepRow row;
      row.true_range = range;
      row.true_bearing = bearing;
      row.true_ne = {scene.beacon.north, scene.beacon.east};
      try {
        const auto frame = chansim::synthesize_frame(scene, settings.reference, 0.0, synth);
        const auto result = pipe.process(frame, pipeline::Navigation{}, cfg.agc);
        if (!result.fix) throw Error(Errc::NoPeakAboveFloor, result.failure);
        row.est_range = result.fix->slant_range;
        row.est_bearing = result.fix->relative_bearing;
        row.est_ne = {result.fix->north, result.fix->east};
        row.range_error = row.est_range - range;
        row.bearing_error = angle_difference(row.est_bearing, bearing);
        row.ok = true;
      } catch (const Error& e) {
        row.failure = e.what();
      }

      if (row.ok) {
        est.push_back(row.est_ne);
        truth.push_back(row.true_ne);
        sum_range_sq += row.range_error * row.range_error;
        sum_bearing_sq += row.bearing_error * row.bearing_error;
        report.max_relative_range_error =
            std::max(report.max_relative_range_error, std::abs(row.range_error) / range);
        report.max_abs_bearing_error = std::max(report.max_abs_bearing_error, std::abs(row.bearing_error));
      } else {
        ++report.failures;
      }
      report.rows.push_back(std::move(row));
    }
  }
  if (!est.empty()) {
    report.metrics = fix::rmse(est, truth);
    report.range_rmse = std::sqrt(sum_range_sq / static_cast<double>(est.size()));
    report.bearing_rmse = std::sqrt(sum_bearing_sq / static_cast<double>(est.size()));
  }
  return report;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "true_range_m,true_bearing_deg,est_range_m,est_bearing_deg,range_error_m,bearing_error_deg,"
         "true_north_m,true_east_m,est_north_m,est_east_m,status\n";
  for (const auto& r : report.rows) {
    fmt::print(out, "{:.3f},{:.3f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{}\n", r.true_range,
               r.true_bearing, r.est_range, r.est_bearing, r.range_error, r.bearing_error, r.true_ne.north,
               r.true_ne.east, r.est_ne.north, r.est_ne.east, r.ok ? std::string("ok") : "\"" + r.failure + "\"");
  }
  fmt::print(out, "# cells={} failures={} rmse_north={:.6f} rmse_east={:.6f} rmse_horizontal={:.6f} "
                  "range_rmse={:.6f} bearing_rmse={:.6f} max_rel_range_error={:.6e} max_abs_bearing_error={:.6f}\n",
             report.rows.size(), report.failures, report.metrics.rmse_north, report.metrics.rmse_east,
             report.metrics.rmse_horizontal, report.range_rmse, report.bearing_rmse,
             report.max_relative_range_error, report.max_abs_bearing_error);
}

}  // namespace r2usbl::sweep
