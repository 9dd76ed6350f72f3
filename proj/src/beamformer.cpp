#include "r2usbl/beamformer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "r2usbl/error.hpp"
#include "r2usbl/fft.hpp"

namespace r2usbl::beamformer {

using std::numbers::pi;

std::size_t transform_length_for(std::size_t segment_length) { return fft::next_pow2(2 * segment_length); }

ElementSpectra element_spectra(const SegmentRows& segments, double sample_rate) {
  ElementSpectra out;
  out.sample_rate = sample_rate;
  const std::size_t n = segments.empty() ? 0 : segments.front().size();
  out.transform_length = transform_length_for(std::max<std::size_t>(n, 1));
  for (const auto& row : segments) {
    auto bins = fft::forward(row, out.transform_length);
    for (auto& b : bins) b = std::conj(b);
    out.bins.push_back(std::move(bins));
  }
  return out;
}

std::vector<Complex> beam_power_spectrum(const ElementSpectra& spectra, const array::ArrayGeometry& geometry,
                                         double c, double theta_deg) {
  const std::size_t count = geometry.element_count();
  if (spectra.bins.size() != count) {
    throw Error(Errc::GeometryMismatch, fmt::format("{} rows for {} elements", spectra.bins.size(), count));
  }
  const auto delays = array::steering_delays(geometry, theta_deg, c);
  const std::size_t nbins = spectra.transform_length / 2 + 1;
  const double df = spectra.bin_width();
  std::vector<Complex> out(nbins, Complex{});
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t k = 0; k < nbins; ++k) {
      const double f = static_cast<double>(k) * df;
      out[k] += spectra.bins[a][k] * std::polar(1.0, 2 * pi * f * delays[a]);
    }
  }
  const double inv = 1.0 / static_cast<double>(count);
  for (auto& v : out) v *= inv;
  return out;
}

std::vector<Complex> beam_power_spectrum(const SegmentRows& segments, double sample_rate,
                                         const array::ArrayGeometry& geometry, double c, double theta_deg) {
  if (segments.size() != geometry.element_count()) {
    throw Error(Errc::GeometryMismatch,
                fmt::format("{} rows for {} elements", segments.size(), geometry.element_count()));
  }
  return beam_power_spectrum(element_spectra(segments, sample_rate), geometry, c, theta_deg);
}

BeamPattern broadband_beam_power(const ElementSpectra& spectra, const array::ArrayGeometry& geometry, double c,
                                 const std::vector<double>& theta_grid, Band band) {
  const std::size_t count = geometry.element_count();
  if (spectra.bins.size() != count) {
    throw Error(Errc::GeometryMismatch, fmt::format("{} rows for {} elements", spectra.bins.size(), count));
  }
  const double df = spectra.bin_width();
  const std::size_t nbins = spectra.transform_length / 2 + 1;
  std::vector<std::size_t> in_band;
  if (band.f1 < band.f2) {
    for (std::size_t k = 1; k < nbins; ++k) {
      const double f = static_cast<double>(k) * df;
      if (f >= band.f1 && f <= band.f2) in_band.push_back(k);
    }
  }
  if (in_band.empty()) {
    throw Error(Errc::EmptyBand, fmt::format("no bins in [{}, {}] Hz at {} Hz spacing", band.f1, band.f2, df));
  }

  BeamPattern pattern;
  pattern.angles = theta_grid;
  pattern.band = band;
  pattern.bin_width = df;
  pattern.powers.reserve(theta_grid.size());

  const double inv = 1.0 / static_cast<double>(count);
  std::vector<Complex> acc(in_band.size());
  for (double theta : theta_grid) {
    const auto delays = array::steering_delays(geometry, theta, c);
    std::fill(acc.begin(), acc.end(), Complex{});
    for (std::size_t a = 0; a < count; ++a) {
      const auto& xa = spectra.bins[a];
      // in_band is contiguous, so the steering phasor advances by a fixed rotation per bin
      Complex phasor = std::polar(1.0, 2 * pi * static_cast<double>(in_band.front()) * df * delays[a]);
      const Complex rotation = std::polar(1.0, 2 * pi * df * delays[a]);
      for (std::size_t j = 0; j < in_band.size(); ++j) {
        acc[j] += xa[in_band[j]] * phasor;
        phasor *= rotation;
      }
    }
    double power = 0.0;
    for (const auto& v : acc) power += std::norm(v * inv);
    pattern.powers.push_back(power * df);
  }
  return pattern;
}

BeamPattern broadband_beam_power(const SegmentRows& segments, double sample_rate,
                                 const array::ArrayGeometry& geometry, double c,
                                 const std::vector<double>& theta_grid, Band band) {
  if (segments.size() != geometry.element_count()) {
    throw Error(Errc::GeometryMismatch,
                fmt::format("{} rows for {} elements", segments.size(), geometry.element_count()));
  }
  if (!(band.f2 < sample_rate / 2)) {
    throw Error(Errc::EmptyBand, fmt::format("band edge {} Hz beyond Nyquist", band.f2));
  }
  return broadband_beam_power(element_spectra(segments, sample_rate), geometry, c, theta_grid, band);
}

std::vector<double> look_angle_grid(double step_deg) {
  if (!(step_deg > 0) || step_deg > 360) throw Error(Errc::InvalidGeometry, fmt::format("grid step {}", step_deg));
  const auto count = static_cast<std::size_t>(std::llround(360.0 / step_deg));
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = 360.0 * static_cast<double>(i) / static_cast<double>(count);
  return grid;
}

namespace {

bool wraps_full_circle(const BeamPattern& p) {
  const std::size_t n = p.angles.size();
  if (n < 3) return false;
  const double step = p.angles[1] - p.angles[0];
  return std::abs(step * static_cast<double>(n) - 360.0) < 1e-6 * 360.0;
}

double parabola_offset(double ym, double y0, double yp) {
  const double denom = ym - 2 * y0 + yp;
  if (!(denom < 0)) return 0.0;
  return std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
}

}  // namespace

DoaEstimate estimate_doa(const BeamPattern& pattern, bool refine) {
  const auto& pw = pattern.powers;
  const std::size_t n = pw.size();
  if (n == 0) throw Error(Errc::AmbiguousPeak, "empty pattern");
  const auto min_it = std::min_element(pw.begin(), pw.end());
  const auto max_it = std::max_element(pw.begin(), pw.end());
  const double pmax = *max_it;
  const double pmin = *min_it;
  if (!(pmax > 0) || pmax < pmin * (1 + 1e-9)) {
    throw Error(Errc::AmbiguousPeak, fmt::format("flat beam pattern (max {:.6g}, min {:.6g})", pmax, pmin));
  }
  // first maximum, i.e. lowest angle on ties
  const std::size_t i = static_cast<std::size_t>(std::distance(pw.begin(), max_it));
  const bool circular = wraps_full_circle(pattern);

  DoaEstimate est;
  est.peak_power = pmax;
  est.theta_hat = pattern.angles[i];

  const bool has_left = circular || i > 0;
  const bool has_right = circular || i + 1 < n;
  const std::size_t left = (i + n - 1) % n;
  const std::size_t right = (i + 1) % n;
  if (refine && has_left && has_right && n >= 3) {
    const double step = circular ? 360.0 / static_cast<double>(n) : pattern.angles[1] - pattern.angles[0];
    double delta = 0.0;
    if (pw[left] > 0 && pw[right] > 0) {
      delta = parabola_offset(std::log(pw[left]), std::log(pmax), std::log(pw[right]));
    } else {
      delta = parabola_offset(pw[left], pmax, pw[right]);
    }
    est.theta_hat = pattern.angles[i] + delta * step;
  }
  est.theta_hat = circular ? array::wrap360(est.theta_hat) : est.theta_hat;

  // Main lobe: walk downhill from the peak on both sides.
  std::vector<bool> in_lobe(n, false);
  in_lobe[i] = true;
  auto walk = [&](int dir) {
    std::size_t cur = i;
    for (std::size_t steps = 0; steps + 1 < n; ++steps) {
      long nxt = static_cast<long>(cur) + dir;
      if (!circular && (nxt < 0 || nxt >= static_cast<long>(n))) break;
      const auto next = static_cast<std::size_t>((nxt + static_cast<long>(n)) % static_cast<long>(n));
      if (in_lobe[next] || pw[next] > pw[cur]) break;
      in_lobe[next] = true;
      cur = next;
    }
  };
  walk(+1);
  walk(-1);
  double side = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!in_lobe[k]) side = std::max(side, pw[k]);
  }
  if (side <= 0) side = pmin;
  // no energy outside the main lobe at all
  est.sidelobe_ratio_db = side > 0 ? std::max(0.0, 10 * std::log10(pmax / side)) : 100.0;
  return est;
}

}  // namespace r2usbl::beamformer
