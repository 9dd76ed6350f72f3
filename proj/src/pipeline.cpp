#include "r2usbl/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "r2usbl/error.hpp"

namespace r2usbl::pipeline {

PipelineSettings make_settings(const config::Config& cfg) {
  PipelineSettings s;
  s.reference = waveform::generate_lfm(cfg.chirp.f_start, cfg.chirp.f_stop, cfg.chirp.duration, cfg.sample_rate,
                                       cfg.chirp.window);
  s.bandpass = waveform::design_bandpass(cfg.bandpass_low(), cfg.bandpass_high(), cfg.bandpass.taps, cfg.sample_rate);
  s.geometry = array::circular_array(cfg.array.radius, cfg.array.elements);
  s.sound_speed = array::sound_speed(cfg.sound_speed);
  s.tof.detection_threshold = cfg.detection.threshold;
  s.tof.subsample = cfg.detection.subsample;
  s.tof.transit_bound = 2 * cfg.array.radius / s.sound_speed;
  s.look_angles = beamformer::look_angle_grid(cfg.doa.grid_deg);
  s.refine_doa = cfg.doa.refine;
  // A tone or near-tone still needs a few bins to integrate over.
  const double min_width = 1.0 / cfg.chirp.duration;
  const double centre = 0.5 * (cfg.chirp.f_start + cfg.chirp.f_stop);
  const double half = 0.5 * std::max(cfg.chirp.f_stop - cfg.chirp.f_start, min_width);
  s.band = {centre - half, centre + half};
  return s;
}

Pipeline::Pipeline(PipelineSettings settings) : settings_(std::move(settings)) {}

PingResult Pipeline::process(const MultichannelFrame& frame, const Navigation& nav, const agc::AgcState& agc) const {
  const auto& s = settings_;
  if (frame.channel_count() != s.geometry.element_count()) {
    throw Error(Errc::GeometryMismatch,
                fmt::format("frame has {} channels, array {} elements", frame.channel_count(),
                            s.geometry.element_count()));
  }
  PingResult r;
  const auto filtered = waveform::apply_filter(frame, s.bandpass);
  const auto corr = detector::correlate(filtered, s.reference);
  r.peak_index = corr.peak_index;
  r.peak_value = corr.peak_value;
  r.normalized_peak = corr.normalized_peak;
  r.snr_db = detector::estimate_snr(corr);

  const double strongest = *std::max_element(corr.peak_value.begin(), corr.peak_value.end());
  r.agc_indicator = agc::peak_indicator(strongest, corr.reference_energy);
  r.agc = agc::agc_update(agc, r.agc_indicator);

  try {
    r.tof = detector::estimate_tof(corr, frame.sample_rate, s.geometry.element_count(), s.tof);
    const auto segment = detector::extract_segment(filtered, *r.tof, s.reference.length());
    r.pattern = beamformer::broadband_beam_power(segment.rows, frame.sample_rate, s.geometry, s.sound_speed,
                                                 s.look_angles, s.band);
    r.doa = beamformer::estimate_doa(*r.pattern, s.refine_doa);

    fix::PositionFix f;
    f.trigger_epoch_ns = frame.trigger_epoch_ns;
    f.tof = r.tof->tof;
    f.slant_range = fix::slant_range(r.tof->tof, s.sound_speed, nav.clock_correction);
    f.horizontal_range = fix::horizontal_project(f.slant_range, nav.depth_difference);
    f.relative_bearing = fix::relative_bearing_from_doa(r.doa->theta_hat);
    f.absolute_bearing = array::wrap360(nav.heading + f.relative_bearing);
    const auto ne = fix::absolute_position(f.horizontal_range, f.relative_bearing, nav.heading, nav.receiver);
    f.north = ne.north;
    f.east = ne.east;
    f.gain_db = r.agc.state.gain_db;
    f.snr_db = std::accumulate(r.snr_db.begin(), r.snr_db.end(), 0.0) / static_cast<double>(r.snr_db.size());
    const bool suspect = r.tof->quality == detector::TofQuality::suspect || segment.truncated;
    f.quality = suspect ? fix::FixQuality::suspect : fix::FixQuality::ok;
    r.fix = f;
  } catch (const Error& e) {
    r.failure = e.what();
  }
  return r;
}

}  // namespace r2usbl::pipeline
