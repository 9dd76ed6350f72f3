// Acceptance harness: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances are fixed here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "r2usbl/agc.hpp"
#include "r2usbl/beamformer.hpp"
#include "r2usbl/chansim.hpp"
#include "r2usbl/config.hpp"
#include "r2usbl/detector.hpp"
#include "r2usbl/fft.hpp"
#include "r2usbl/mission.hpp"
#include "r2usbl/pipeline.hpp"
#include "r2usbl/raw_frame.hpp"
#include "r2usbl/sentence.hpp"
#include "r2usbl/sweep.hpp"

using namespace r2usbl;

namespace {

constexpr double kFs = 48000.0;
constexpr double kC = 1500.0;

// criterion tolerances
constexpr double kSweepRangeRel = 1e-3;
constexpr double kSweepBearingDeg = 0.1;
constexpr double kDriftOffset = 180e-6;
constexpr double kDriftShift = 0.270;
constexpr double kDriftTol = 0.5 * kC / kFs;
constexpr double kMatchedFilterRel = 1e-9;
constexpr double kBeamformerRel = 1e-6;
constexpr double kGainLowDb = 18.0;
constexpr double kGainHighDb = 22.0;
constexpr int kGainTrials = 200;
constexpr int kAgcScenarios = 20;
constexpr double kMaxRange = 1309.0;
constexpr double kMaxRangeRel = 1e-3;
constexpr double kMaxRangeHitRate = 0.95;
constexpr double kTransectMedianRel = 0.05;

struct Outcome {
  bool pass = false;
  std::string detail;
};

config::Config base_config(const char* mode = "simulate") {
  return config::parse_config(fmt::format("mode: {}\nsample_rate: 48000\n", mode));
}

double rel_err(double got, double want, double scale) { return std::abs(got - want) / scale; }

// 1 --------------------------------------------------------------------------
Outcome sweep_accuracy() {
  auto cfg = base_config("sweep");
  cfg.detection.subsample = true;
  const auto rep = sweep::run_sweep(cfg);
  Outcome o;
  o.pass = rep.rows.size() == 828 && rep.failures == 0 && rep.max_relative_range_error < kSweepRangeRel &&
           rep.max_abs_bearing_error < kSweepBearingDeg;
  o.detail = fmt::format("{} cells, {} failed, max range err {:.4f}% (< {}%), max |bearing err| {:.4f} deg (< {})",
                         rep.rows.size(), rep.failures, 100 * rep.max_relative_range_error, 100 * kSweepRangeRel,
                         rep.max_abs_bearing_error, kSweepBearingDeg);
  return o;
}

// 2 --------------------------------------------------------------------------
Outcome clock_drift_bias() {
  auto cfg = base_config();
  cfg.ping_interval = 0.5;
  cfg.detection.subsample = true;
  const pipeline::Pipeline pipe(pipeline::make_settings(cfg));
  chansim::SynthesisOptions synth;
  synth.frame_length = cfg.frame_length();
  double worst = 0.0;
  bool ok = true;
  for (const auto [range, bearing] : {std::pair{75.0, 0.0}, {12.5, 37.0}, {240.0, 200.0}, {600.0, 311.0}}) {
    chansim::SceneSpec s;
    s.geometry = pipe.settings().geometry;
    s.receiver = {0, 0, 5};
    s.beacon = {range * std::cos(array::deg2rad(bearing)), range * std::sin(array::deg2rad(bearing)), 5};
    const auto clean = pipe.process(chansim::synthesize_frame(s, pipe.settings().reference, 0.0, synth), {}, cfg.agc);
    chansim::ClockPair clocks;
    clocks.receiver.initial_offset = kDriftOffset;
    const auto biased =
        pipe.process(chansim::synthesize_frame(s, pipe.settings().reference, clocks, synth), {}, cfg.agc);
    if (!clean.ok() || !biased.ok()) return {false, "no fix"};
    const double shift = biased.fix->slant_range - clean.fix->slant_range;
    worst = std::max(worst, std::abs(shift - kDriftShift));
    ok = ok && std::abs(shift - kDriftShift) <= kDriftTol;
  }
  return {ok, fmt::format("worst |shift - {:.3f} m| = {:.5f} m (<= {:.5f})", kDriftShift, worst, kDriftTol)};
}

// 3 --------------------------------------------------------------------------
Outcome matched_filter_oracle() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 256)(rng);
    const std::size_t m = std::uniform_int_distribution<std::size_t>(n, 1024)(rng);
    const auto x = oracle::gaussian(n, 1.0, rng());
    const auto y = oracle::gaussian(m, 1.0, rng());
    const auto z = detector::matched_filter(y, x);
    const auto want = oracle::correlation(y, x);
    if (z.size() != want.size()) return {false, "length mismatch"};
    double scale = 0.0;
    for (double v : want) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < z.size(); ++k) worst = std::max(worst, rel_err(z[k], want[k], scale));
  }
  return {worst <= kMatchedFilterRel, fmt::format("200 instances, worst rel err {:.2e} (<= {:.0e})", worst,
                                                  kMatchedFilterRel)};
}

// 4 --------------------------------------------------------------------------
Outcome beamformer_oracle() {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(16, 96)(rng);
    const std::size_t a = std::uniform_int_distribution<std::size_t>(3, 8)(rng);
    const auto g = array::circular_array(0.03 + 0.12 * u(rng), a);
    beamformer::SegmentRows rows;
    for (std::size_t k = 0; k < a; ++k) rows.push_back(oracle::gaussian(n, 1.0, rng()));
    const double f1 = 2000 + 10000 * u(rng);
    const beamformer::Band band{f1, f1 + 3000 + 6000 * u(rng)};
    std::vector<double> grid;
    for (int j = 0; j < 6; ++j) grid.push_back(360 * u(rng));
    const auto p = beamformer::broadband_beam_power(rows, kFs, g, kC, grid, band);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto d = array::steering_delays(g, grid[j], kC);
      const double want =
          oracle::delay_and_sum_power(rows, d, kFs, beamformer::transform_length_for(n), band.f1, band.f2);
      worst = std::max(worst, rel_err(p.powers[j], want, want));
    }
  }
  return {worst <= kBeamformerRel,
          fmt::format("50 instances x 6 angles, worst rel err {:.2e} (<= {:.0e})", worst, kBeamformerRel)};
}

// 5 --------------------------------------------------------------------------
Outcome processing_gain() {
  const auto ref = waveform::generate_lfm(10000, 12000, 0.05, kFs);
  chansim::SceneSpec s;
  s.geometry = array::circular_array(0.075, 6);
  s.receiver = {0, 0, 5};
  s.beacon = {60, 0, 5};
  chansim::SynthesisOptions synth;
  synth.frame_length = 8192;
  const auto clean = chansim::synthesize_frame(s, ref, 0.0, synth);
  const auto& sig = clean.channels[0];
  const auto z_sig = detector::matched_filter(sig, ref);
  const double peak = z_sig[detector::argmax(z_sig)];
  double sig_energy = 0.0;
  for (double v : sig) sig_energy += v * v;
  const double sig_power = sig_energy / static_cast<double>(ref.length());

  s.snr_db = 0.0;
  const std::size_t m = synth.frame_length;
  double in_noise = 0.0;
  double out_var = 0.0;
  for (int t = 0; t < kGainTrials; ++t) {
    synth.seed = 5000 + static_cast<std::uint64_t>(t);
    const auto noisy = chansim::synthesize_frame(s, ref, 0.0, synth);
    std::vector<double> noise(m);
    for (std::size_t n = 0; n < m; ++n) noise[n] = noisy.channels[0][n] - sig[n];
    // brick-wall in-band power
    const auto spec = fft::forward(noise, m);
    double band = 0.0;
    for (std::size_t k = 1; k < m / 2; ++k) {
      const double f = kFs * static_cast<double>(k) / static_cast<double>(m);
      if (f >= 10000 && f <= 12000) band += std::norm(spec[k]);
    }
    in_noise += 2 * band / (static_cast<double>(m) * static_cast<double>(m));
    // matched-filter output noise over the fully overlapped lags
    const auto zn = detector::matched_filter(noise, ref);
    const std::size_t valid = m - ref.length() + 1;
    double mean = 0.0;
    for (std::size_t n = 0; n < valid; ++n) mean += zn[n];
    mean /= static_cast<double>(valid);
    double var = 0.0;
    for (std::size_t n = 0; n < valid; ++n) var += (zn[n] - mean) * (zn[n] - mean);
    out_var += var / static_cast<double>(valid - 1);
  }
  in_noise /= kGainTrials;
  out_var /= kGainTrials;
  const double snr_in = sig_power / in_noise;
  // envelope peak power over noise power per quadrature
  const double snr_out = peak * peak / (2 * out_var);
  const double gain_db = 10 * std::log10(snr_out / snr_in);
  return {gain_db >= kGainLowDb && gain_db <= kGainHighDb,
          fmt::format("{} trials, in {:.2f} dB, out {:.2f} dB, gain {:.2f} dB (in [{}, {}])", kGainTrials,
                      10 * std::log10(snr_in), 10 * std::log10(snr_out), gain_db, kGainLowDb, kGainHighDb)};
}

// 6 --------------------------------------------------------------------------
beamformer::SegmentRows plane_rows(const pipeline::PipelineSettings& st, double bearing, double range) {
  chansim::SceneSpec s;
  s.geometry = st.geometry;
  s.mode = chansim::PropagationMode::planewave;
  s.receiver = {0, 0, 5};
  s.beacon = {range * std::cos(array::deg2rad(bearing)), range * std::sin(array::deg2rad(bearing)), 5};
  chansim::SynthesisOptions synth;
  synth.frame_length = static_cast<std::size_t>(range / kC * kFs) + 2 * st.reference.length();
  const auto f = chansim::synthesize_frame(s, st.reference, 0.0, synth);
  const auto start = static_cast<std::ptrdiff_t>(std::llround(range / kC * kFs));
  beamformer::SegmentRows rows;
  for (const auto& ch : f.channels) {
    rows.emplace_back(ch.begin() + start, ch.begin() + start + static_cast<std::ptrdiff_t>(st.reference.length()));
  }
  return rows;
}

Outcome symmetry_suite() {
  std::vector<std::string> broken;
  const auto st = pipeline::make_settings(base_config());
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(0, 1);

  // 60° periodicity for identical channels
  {
    const beamformer::SegmentRows rows(6, oracle::gaussian(512, 1.0, 77));
    const auto p = beamformer::broadband_beam_power(rows, kFs, st.geometry, kC, st.look_angles, st.band);
    const double peak = *std::max_element(p.powers.begin(), p.powers.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < 360; ++i) worst = std::max(worst, std::abs(p.powers[i] - p.powers[(i + 60) % 360]));
    if (worst > 1e-9 * peak) broken.push_back(fmt::format("periodicity {:.2e}", worst / peak));
  }
  // argmax invariance under positive scaling: matched filter and DOA
  for (int i = 0; i < 50; ++i) {
    const auto y = oracle::gaussian(3000, 1.0, rng());
    auto ys = y;
    const double alpha = 1e-3 + 1e3 * u(rng);
    for (auto& v : ys) v *= alpha;
    if (detector::argmax(detector::matched_filter(y, st.reference)) !=
        detector::argmax(detector::matched_filter(ys, st.reference))) {
      broken.push_back("matched-filter argmax moved under scaling");
      break;
    }
  }
  {
    const auto rows = plane_rows(st, 123.4, 30.0);
    auto scaled = rows;
    for (auto& r : scaled) {
      for (auto& v : r) v *= 7.5;
    }
    const auto a = beamformer::broadband_beam_power(rows, kFs, st.geometry, kC, st.look_angles, st.band);
    const auto b = beamformer::broadband_beam_power(scaled, kFs, st.geometry, kC, st.look_angles, st.band);
    if (beamformer::estimate_doa(a, false).theta_hat != beamformer::estimate_doa(b, false).theta_hat) {
      broken.push_back("DOA argmax moved under scaling");
    }
  }
  // steering delays sum to zero about the centroid
  {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto d = array::steering_delays(st.geometry, 720 * u(rng) - 360, kC);
      double sum = 0.0;
      for (double v : d) sum += v;
      worst = std::max(worst, std::abs(sum));
    }
    if (worst > 1e-18) broken.push_back(fmt::format("delay centroid sum {:.2e}", worst));
  }
  // rotating the arrival rotates the DOA to within one grid cell
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double base = 360 * u(rng);
      const double delta = 360 * u(rng);
      const auto pa = beamformer::broadband_beam_power(plane_rows(st, base, 40.0), kFs, st.geometry, kC,
                                                       st.look_angles, st.band);
      const auto pb = beamformer::broadband_beam_power(plane_rows(st, base + delta, 40.0), kFs, st.geometry, kC,
                                                       st.look_angles, st.band);
      const double d = sweep::angle_difference(beamformer::estimate_doa(pb).theta_hat,
                                               beamformer::estimate_doa(pa).theta_hat + delta);
      worst = std::max(worst, std::abs(d));
    }
    if (worst > 1.0) broken.push_back(fmt::format("rotation error {:.3f} deg", worst));
  }
  if (broken.empty()) return {true, "periodicity, scaling, centroid, rotation all hold"};
  std::string why;
  for (const auto& b : broken) why += (why.empty() ? "" : "; ") + b;
  return {false, why};
}

// 7 --------------------------------------------------------------------------
Outcome agc_convergence() {
  auto cfg = base_config();
  cfg.ping_interval = 0.8;
  const pipeline::Pipeline pipe(pipeline::make_settings(cfg));
  const auto& a = cfg.agc;
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> u(0, 1);
  int passed = 0;
  std::string first_failure;
  for (int sc = 0; sc < kAgcScenarios; ++sc) {
    const double range = 5.0 * std::pow(120.0, u(rng));  // 5 m to 600 m, log-uniform
    const double g0 = std::round(a.min_gain_db + (a.max_gain_db - a.min_gain_db) * u(rng));

    mission::Scene scene;
    scene.beacon = {range, 0.0, 5.0};
    scene.waypoints = {mission::Waypoint{0, 0, 0, 5, 0}};

    // the indicator is linear in gain, so one noiseless 0 dB look fixes g*
    chansim::SynthesisOptions synth;
    synth.frame_length = cfg.frame_length();
    const auto probe = pipe.process(
        chansim::synthesize_frame(mission::scene_at(scene, pipe.settings(), 0.0), pipe.settings().reference, 0.0,
                                  synth),
        {}, a);
    const double i0 = probe.agc_indicator;
    const double lo = std::clamp(20 * std::log10(a.lower_threshold / i0), a.min_gain_db, a.max_gain_db);
    const double hi = std::clamp(20 * std::log10(a.upper_threshold / i0), a.min_gain_db, a.max_gain_db);
    const double target = std::clamp(g0, lo, hi);
    const auto pings = static_cast<std::size_t>(std::ceil(std::abs(g0 - target) / a.step_db));

    auto run_cfg = cfg;
    run_cfg.agc.gain_db = g0;
    run_cfg.seed = 9000 + static_cast<std::uint64_t>(sc);
    scene.snr_db = 30.0;
    scene.pings = pings + 1;
    mission::RunOptions opts;
    opts.write_logs = false;
    const auto sum = mission::run_simulation(run_cfg, scene, opts);
    const double reached = pings == 0 ? g0 : sum.records[pings - 1].result.agc.state.gain_db;
    if (std::abs(reached - target) <= a.step_db) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = fmt::format("; first miss: range {:.1f} m, g0 {} dB, g* {:.2f} dB, reached {} dB after {}",
                                  range, g0, target, reached, pings);
    }
  }
  return {passed == kAgcScenarios,
          fmt::format("{}/{} scenarios within one step of g* after ceil(|g0-g*|/step) pings{}", passed, kAgcScenarios,
                      first_failure)};
}

// 8 --------------------------------------------------------------------------
Outcome format_round_trips() {
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> u(-1, 1);
  int raw_bad = 0;
  for (const auto [ch, n] : {std::pair<std::size_t, std::size_t>{6, 48000}, {3, 17}, {8, 1000}}) {
    MultichannelFrame f;
    f.sample_rate = kFs;
    f.gain_db = 12;
    f.trigger_epoch_ns = rng();
    f.channels.assign(ch, std::vector<double>(n));
    for (auto& row : f.channels) {
      for (auto& v : row) v = static_cast<float>(u(rng));
    }
    const auto g = rawframe::decode_frame(rawframe::encode_frame(f, rawframe::SampleFormat::float32));
    raw_bad += !(g.channels == f.channels && g.trigger_epoch_ns == f.trigger_epoch_ns && g.gain_db == f.gain_db &&
                 g.sample_rate == f.sample_rate);
  }
  int sentence_bad = 0;
  int checksum_bad = 0;
  for (int i = 0; i < 500; ++i) {
    fix::PositionFix f;
    f.trigger_epoch_ns = rng() % 4'000'000'000'000'000'000ULL;
    f.tof = std::abs(u(rng));
    f.slant_range = 2000 * std::abs(u(rng));
    f.relative_bearing = 180 + 179 * u(rng);
    f.absolute_bearing = 180 + 179 * u(rng);
    f.gain_db = std::round(48 * std::abs(u(rng)));
    f.snr_db = 40 * u(rng);
    f.quality = i % 2 ? fix::FixQuality::ok : fix::FixQuality::suspect;
    const auto s = sentence::format_fix_sentence(f);
    sentence_bad += sentence::format_fix_sentence(sentence::parse_fix_sentence(s)) != s;
    const auto star = s.find('*');
    checksum_bad += std::stoul(s.substr(star + 1, 2), nullptr, 16) != oracle::xor_checksum(s.substr(1, star - 1));
  }
  checksum_bad += sentence::checksum("R2UBL,0.000000000,0.000000,0.00,0.00,0.00,0,0.0,ok") != oracle::kZeroFixChecksum;
  return {raw_bad == 0 && sentence_bad == 0 && checksum_bad == 0,
          fmt::format("raw mismatches {}, sentence mismatches {}, checksum mismatches {}", raw_bad, sentence_bad,
                      checksum_bad)};
}

// 9 --------------------------------------------------------------------------
Outcome max_range() {
  auto cfg = base_config();
  cfg.ping_interval = 1.0;
  // a drifting receiver clock, left uncorrected
  cfg.clocks.receiver.initial_offset = 40e-6;
  cfg.clocks.receiver.drift_rate = 1e-7;
  cfg.seed = 1309;
  mission::Scene scene;
  scene.beacon = {kMaxRange * std::cos(array::deg2rad(25)), kMaxRange * std::sin(array::deg2rad(25)), 5.0};
  scene.waypoints = {mission::Waypoint{0, 0, 0, 5, 0}};
  scene.water_depth = 200;
  scene.snr_db = 10.0;
  scene.pings = 100;
  mission::RunOptions opts;
  opts.write_logs = false;
  const auto sum = mission::run_simulation(cfg, scene, opts);
  int hits = 0;
  double worst = 0.0;
  for (const auto& r : sum.records) {
    if (!r.result.ok() || !r.true_slant_range) continue;
    const double bias = kC * std::abs(clock::clock_offset_at(cfg.clocks.receiver, r.elapsed) -
                                      clock::clock_offset_at(cfg.clocks.beacon, r.elapsed));
    const double err = std::abs(r.result.fix->slant_range - *r.true_slant_range);
    worst = std::max(worst, err - bias);
    hits += err < kMaxRangeRel * *r.true_slant_range + bias;
  }
  const double rate = static_cast<double>(hits) / 100.0;
  return {sum.records.size() == 100 && rate >= kMaxRangeHitRate,
          fmt::format("{} fixes of 100 pings, {}% within 0.1% + clock bias (>= {}%), worst excess {:.3f} m",
                      sum.fixes, hits, 100 * kMaxRangeHitRate, worst)};
}

// 10 -------------------------------------------------------------------------
Outcome lake_transect() {
  auto cfg = base_config();
  cfg.ping_interval = 0.5;
  cfg.seed = 4290;
  mission::Scene scene;
  scene.beacon = {0.0, 0.0, 25.0};
  scene.water_depth = 40.0;
  scene.snr_db = 5.0;
  scene.paths = {chansim::default_path(chansim::PathKind::direct), chansim::default_path(chansim::PathKind::surface),
                 chansim::default_path(chansim::PathKind::bottom)};
  scene.pings = 200;
  // straight northward run passing 42 m abeam and opening to 330 m
  scene.waypoints = {mission::Waypoint{0.0, -30.0, 30.0, 2.0, 0.0}, mission::Waypoint{99.5, 330.0, 30.0, 2.0, 0.0}};
  mission::RunOptions opts;
  opts.write_logs = false;
  const auto sum = mission::run_simulation(cfg, scene, opts);
  std::vector<double> rel;
  for (const auto& r : sum.records) {
    const auto pose = mission::pose_at(scene, r.elapsed);
    const double range = std::hypot(scene.beacon.north - pose.north, scene.beacon.east - pose.east);
    if (!r.result.ok()) {
      rel.push_back(INFINITY);
      continue;
    }
    const auto& f = *r.result.fix;
    rel.push_back(std::hypot(f.north - r.truth->north, f.east - r.truth->east) / range);
  }
  std::sort(rel.begin(), rel.end());
  const double median = rel.empty() ? INFINITY : 0.5 * (rel[(rel.size() - 1) / 2] + rel[rel.size() / 2]);

  // rmse against hand-computed fixture values
  const std::vector<fix::NorthEast> est{{3, 4}, {-3, -4}, {3, -4}, {-3, 4}};
  const std::vector<fix::NorthEast> zero(4);
  const auto m1 = fix::rmse(est, zero);
  const std::vector<fix::NorthEast> est2{{1, 1}, {2, 2}};
  const std::vector<fix::NorthEast> truth2{{1, -1}, {2, 0}};
  const auto m2 = fix::rmse(est2, truth2);
  const bool fixture = m1.rmse_north == 3.0 && m1.rmse_east == 4.0 && m1.rmse_horizontal == 5.0 &&
                       m1.sample_count == 4 && m2.rmse_north == 0.0 && m2.rmse_east == 2.0 &&
                       m2.rmse_horizontal == 2.0;
  return {sum.records.size() == 200 && median < kTransectMedianRel && fixture,
          fmt::format("{} fixes of 200 pings, median horizontal error {:.3f}% of range (< {}%), rmse fixture {}",
                      sum.fixes, 100 * median, 100 * kTransectMedianRel, fixture ? "exact" : "MISMATCH")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"sweep range/bearing accuracy", sweep_accuracy},
      {"clock-drift range bias", clock_drift_bias},
      {"matched filter vs direct sum", matched_filter_oracle},
      {"beamformer vs delay-and-sum", beamformer_oracle},
      {"matched-filter processing gain", processing_gain},
      {"symmetry suite", symmetry_suite},
      {"AGC convergence", agc_convergence},
      {"format round trips", format_round_trips},
      {"max-range operating envelope", max_range},
      {"multipath transect", lake_transect},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    fmt::print("criterion {:2}: {} {} -- {} [{:.1f} s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
               o.detail, secs);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
