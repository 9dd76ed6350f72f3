#include "r2usbl/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "r2usbl/error.hpp"
#include "r2usbl/fft.hpp"

namespace r2usbl::detector {
namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double robust_sigma(std::span<const double> z) {
  std::vector<double> v(z.begin(), z.end());
  const double med = median_of(v);
  for (auto& x : v) x = std::abs(x - med);
  return 1.4826 * median_of(std::move(v));
}

constexpr long kInterpHalfWidth = 32;
constexpr double kKaiserBeta = 8.0;

double interpolate(std::span<const double> z, long centre, double t) {
  const long lo = std::max(0L, centre - kInterpHalfWidth);
  const long hi = std::min(static_cast<long>(z.size()) - 1, centre + kInterpHalfWidth);
  const double span_width = static_cast<double>(kInterpHalfWidth + 1);
  static const double norm = std::cyl_bessel_i(0.0, kKaiserBeta);
  double acc = 0.0;
  for (long k = lo; k <= hi; ++k) {
    const double d = t - static_cast<double>(k);
    const double u = d / span_width;
    if (std::abs(u) >= 1.0) continue;
    const double w = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1 - u * u)) / norm;
    const double s = d == 0.0 ? 1.0 : std::sin(std::numbers::pi * d) / (std::numbers::pi * d);
    acc += z[static_cast<std::size_t>(k)] * s * w;
  }
  return acc;
}

constexpr std::size_t kEnvelopeHalfWidth = 128;
constexpr double kCarrierSearch = 8.0;

/// |z + jH{z}| of a short stretch of correlation output.
std::vector<double> envelope(std::span<const double> z) {
  const std::size_t len = fft::next_pow2(2 * z.size());
  auto spec = fft::forward(z, len);
  spec.front() = 0.0;
  spec.back() = 0.0;
  for (auto& b : spec) b *= fft::Complex(0.0, -1.0);
  const auto h = fft::inverse(spec, len);
  std::vector<double> env(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) env[i] = std::hypot(z[i], h[i]);
  return env;
}

std::size_t argmax_of(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_lengths(std::size_t m, std::size_t n) {
  if (n < 2 || m < n) {
    throw Error(Errc::ReferenceLongerThanFrame, fmt::format("reference {} samples, frame {}", n, m));
  }
}

std::vector<double> correlate_spectrum(std::span<const double> channel, std::size_t n,
                                       const std::vector<fft::Complex>& x, std::size_t len) {
  const std::size_t m = channel.size();
  const std::size_t out_len = n + m - 1;
  auto y = fft::forward(channel, len);
  for (std::size_t k = 0; k < y.size(); ++k) y[k] *= std::conj(x[k]);
  auto circ = fft::inverse(y, len);
  // With len >= N+M-1 the circular correlation equals the sum for n < M; for
  // n >= M the reference index m-n is negative for every m, so z is zero.
  std::vector<double> z(out_len, 0.0);
  std::copy_n(circ.begin(), m, z.begin());
  return z;
}

}  // namespace

std::vector<double> matched_filter(std::span<const double> channel, std::span<const double> reference) {
  check_lengths(channel.size(), reference.size());
  const std::size_t len = fft::next_pow2(channel.size() + reference.size() - 1);
  return correlate_spectrum(channel, reference.size(), fft::forward(reference, len), len);
}

std::vector<double> matched_filter(std::span<const double> channel, const waveform::ReferenceWaveform& ref) {
  return matched_filter(channel, std::span<const double>(ref.samples));
}

std::size_t argmax(std::span<const double> values) {
  // max_element returns the first of equal maxima
  return static_cast<std::size_t>(std::distance(values.begin(), std::max_element(values.begin(), values.end())));
}

double refine_peak(std::span<const double> z, std::size_t index) {
  // At fs/fc near 4 the sampled argmax can sit one carrier cycle away from the
  // true lag. The envelope has no such ambiguity: start from the carrier peak
  // nearest to the envelope maximum.
  const std::size_t lo = index > kEnvelopeHalfWidth ? index - kEnvelopeHalfWidth : 0;
  const std::size_t hi = std::min(z.size(), index + kEnvelopeHalfWidth + 1);
  const auto env = envelope(z.subspan(lo, hi - lo));
  const std::size_t e = argmax_of(env);
  double te = static_cast<double>(e);
  if (e > 0 && e + 1 < env.size()) {
    const double den = env[e - 1] - 2 * env[e] + env[e + 1];
    if (den < 0) te += 0.5 * (env[e - 1] - env[e + 1]) / den;
  }
  te += static_cast<double>(lo);
  std::size_t best = index;
  double best_dist = std::abs(static_cast<double>(index) - te);
  const auto from = static_cast<std::size_t>(std::max(1.0, std::floor(te - kCarrierSearch)));
  const auto to = std::min(z.size() - 1, static_cast<std::size_t>(std::max(0.0, std::ceil(te + kCarrierSearch))));
  for (std::size_t j = from; j < to; ++j) {
    if (z[j] >= z[j - 1] && z[j] >= z[j + 1] && std::abs(static_cast<double>(j) - te) < best_dist) {
      best = j;
      best_dist = std::abs(static_cast<double>(j) - te);
    }
  }
  index = best;
  const auto centre = static_cast<long>(index);
  // Golden-section search for the interpolated maximum within one sample.
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = static_cast<double>(index) - 1.0;
  double b = static_cast<double>(index) + 1.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = interpolate(z, centre, c);
  double fd = interpolate(z, centre, d);
  while (b - a > 1e-7) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = interpolate(z, centre, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = interpolate(z, centre, d);
    }
  }
  const double t = 0.5 * (a + b);
  // Keep the sample itself if interpolation found nothing higher.
  return interpolate(z, centre, t) >= z[index] ? t : static_cast<double>(index);
}

CorrelationResult correlate(const MultichannelFrame& frame, const waveform::ReferenceWaveform& ref) {
  CorrelationResult out;
  out.reference_length = ref.length();
  out.reference_energy = ref.energy();
  const std::size_t n = ref.length();
  const std::size_t m = frame.samples_per_channel();
  check_lengths(m, n);
  const std::size_t len = fft::next_pow2(n + m - 1);
  const auto x = fft::forward(ref.samples, len);
  for (const auto& ch : frame.channels) {
    auto z = correlate_spectrum(ch, n, x, len);
    const std::size_t k = argmax(z);
    double window_energy = 0.0;
    for (std::size_t m = k; m < std::min(k + n, ch.size()); ++m) window_energy += ch[m] * ch[m];
    const double denom = std::sqrt(out.reference_energy * window_energy);
    out.peak_index.push_back(k);
    out.peak_value.push_back(z[k]);
    out.normalized_peak.push_back(denom > 0 ? z[k] / denom : 0.0);
    out.noise_floor.push_back(robust_sigma(z));
    out.z.push_back(std::move(z));
  }
  return out;
}

TofEstimate estimate_tof(const CorrelationResult& corr, double sample_rate, std::size_t element_count,
                         const TofOptions& options) {
  if (corr.channel_count() != element_count || element_count == 0) {
    throw Error(Errc::GeometryMismatch,
                fmt::format("{} correlation channels for {} elements", corr.channel_count(), element_count));
  }
  const bool detected = std::any_of(corr.normalized_peak.begin(), corr.normalized_peak.end(),
                                    [&](double p) { return p >= options.detection_threshold; });
  if (!detected) {
    const double best = *std::max_element(corr.normalized_peak.begin(), corr.normalized_peak.end());
    throw Error(Errc::NoPeakAboveFloor,
                fmt::format("best normalized peak {:.3f} below {:.3f}", best, options.detection_threshold));
  }

  TofEstimate est;
  est.per_channel_peaks.reserve(element_count);
  for (std::size_t i = 0; i < element_count; ++i) {
    const std::size_t k = corr.peak_index[i];
    est.per_channel_peaks.push_back(options.subsample ? refine_peak(corr.z[i], k) : static_cast<double>(k));
  }
  const double sum = std::accumulate(est.per_channel_peaks.begin(), est.per_channel_peaks.end(), 0.0);
  est.tof = sum / (static_cast<double>(element_count) * sample_rate);
  const auto [lo, hi] = std::minmax_element(est.per_channel_peaks.begin(), est.per_channel_peaks.end());
  est.spread = (*hi - *lo) / sample_rate;
  est.quality = est.spread > options.transit_bound + 2.0 / sample_rate ? TofQuality::suspect : TofQuality::ok;
  return est;
}

Segment extract_segment(const MultichannelFrame& filtered, const TofEstimate& tof, std::size_t ref_length) {
  const std::size_t m = filtered.samples_per_channel();
  const double mean_peak = std::accumulate(tof.per_channel_peaks.begin(), tof.per_channel_peaks.end(), 0.0) /
                           static_cast<double>(tof.per_channel_peaks.size());
  const long long k = std::llround(mean_peak);
  if (k < 0 || static_cast<std::size_t>(k) >= m) {
    throw Error(Errc::SegmentOutOfFrame, fmt::format("segment start {} outside frame of {}", k, m));
  }
  Segment seg;
  seg.start = static_cast<std::size_t>(k);
  seg.truncated = seg.start + ref_length > m;
  const std::size_t avail = std::min(ref_length, m - seg.start);
  for (const auto& ch : filtered.channels) {
    std::vector<double> row(ref_length, 0.0);
    std::copy_n(ch.begin() + static_cast<std::ptrdiff_t>(seg.start), avail, row.begin());
    seg.rows.push_back(std::move(row));
  }
  return seg;
}

namespace {

double snr_from(std::span<const double> z, double peak, double sigma) {
  if (z.size() < 100) throw Error(Errc::DegenerateInput, fmt::format("{} correlation samples", z.size()));
  const bool all_zero = std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; });
  if (all_zero) throw Error(Errc::DegenerateInput, "all-zero correlation");
  if (sigma <= 0.0) return peak > 0 ? kSnrCapDb : -kSnrCapDb;
  if (peak <= 0.0) return -kSnrCapDb;
  return std::min(kSnrCapDb, 20 * std::log10(peak / sigma));
}

}  // namespace

double estimate_snr(std::span<const double> z) {
  if (z.empty()) throw Error(Errc::DegenerateInput, "empty correlation");
  return snr_from(z, *std::max_element(z.begin(), z.end()), robust_sigma(z));
}

std::vector<double> estimate_snr(const CorrelationResult& corr) {
  std::vector<double> out;
  out.reserve(corr.channel_count());
  for (std::size_t i = 0; i < corr.channel_count(); ++i) {
    try {
      out.push_back(snr_from(corr.z[i], corr.peak_value[i], corr.noise_floor[i]));
    } catch (const Error&) {
      out.push_back(-kSnrCapDb);
    }
  }
  return out;
}

}  // namespace r2usbl::detector
