#pragma once

#include <optional>
#include <string>
#include <vector>

#include "r2usbl/agc.hpp"
#include "r2usbl/array.hpp"
#include "r2usbl/beamformer.hpp"
#include "r2usbl/config.hpp"
#include "r2usbl/detector.hpp"
#include "r2usbl/fix.hpp"
#include "r2usbl/frame.hpp"
#include "r2usbl/waveform.hpp"

namespace r2usbl::pipeline {

struct PipelineSettings {
  waveform::ReferenceWaveform reference;
  waveform::FirFilter bandpass;
  array::ArrayGeometry geometry;
  double sound_speed = 1500.0;
  detector::TofOptions tof;
  std::vector<double> look_angles;
  bool refine_doa = true;
  beamformer::Band band;
};

PipelineSettings make_settings(const config::Config& config);

/// Receiver attitude and position at the ping, plus the clock correction
/// subtracted from the TOF before ranging.
struct Navigation {
  double heading = 0.0;  // deg clockwise from north
  fix::NorthEast receiver;
  double depth_difference = 0.0;  // beacon depth minus receiver depth, m
  double clock_correction = 0.0;  // s
};

struct PingResult {
  std::vector<std::size_t> peak_index;
  std::vector<double> peak_value;
  std::vector<double> normalized_peak;
  std::vector<double> snr_db;
  std::optional<detector::TofEstimate> tof;
  std::optional<beamformer::BeamPattern> pattern;
  std::optional<beamformer::DoaEstimate> doa;
  std::optional<fix::PositionFix> fix;
  agc::AgcUpdate agc;
  double agc_indicator = 0.0;
  std::string failure;  // why no fix was produced, empty otherwise

  bool ok() const { return fix.has_value(); }
};

/// bandpass → matched filter → TOF → segment → beamforming → DOA → AGC → fix.
/// Holds only immutable settings; safe to call from one thread per instance.
class Pipeline {
 public:
  explicit Pipeline(PipelineSettings settings);

  PingResult process(const MultichannelFrame& frame, const Navigation& nav, const agc::AgcState& agc) const;

  const PipelineSettings& settings() const { return settings_; }

 private:
  PipelineSettings settings_;
};

}  // namespace r2usbl::pipeline
