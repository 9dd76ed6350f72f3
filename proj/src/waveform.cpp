#include "r2usbl/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "r2usbl/error.hpp"
#include "r2usbl/fft.hpp"

namespace r2usbl::waveform {

using std::numbers::pi;

double ReferenceWaveform::energy() const {
  return std::inner_product(samples.begin(), samples.end(), samples.begin(), 0.0);
}

double window_value(const Window& w, double u) {
  if (w.kind == Window::Kind::rectangular || w.alpha <= 0.0) return 1.0;
  const double a = std::min(w.alpha, 1.0);
  if (u < a / 2) return 0.5 * (1 - std::cos(2 * pi * u / a));
  if (u > 1 - a / 2) return 0.5 * (1 - std::cos(2 * pi * (1 - u) / a));
  return 1.0;
}

ReferenceWaveform generate_lfm(double f_start, double f_stop, double duration, double sample_rate,
                               Window window) {
  if (!(duration > 0)) throw Error(Errc::NonPositiveDuration, fmt::format("duration {}", duration));
  if (f_start < 0 || f_start > f_stop || !(f_stop < sample_rate / 2)) {
    throw Error(Errc::BandExceedsNyquist,
                fmt::format("band [{}, {}] Hz at sample rate {} Hz", f_start, f_stop, sample_rate));
  }
  const auto length = static_cast<std::size_t>(std::llround(duration * sample_rate));
  if (length < 2) throw Error(Errc::NonPositiveDuration, "chirp shorter than two samples");

  ReferenceWaveform ref;
  ref.f_start = f_start;
  ref.f_stop = f_stop;
  ref.duration = duration;
  ref.sample_rate = sample_rate;
  ref.window = window;
  ref.samples.resize(length);

  const double sweep = (f_stop - f_start) / duration;
  for (std::size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    const double phase = 2 * pi * (f_start * t + 0.5 * sweep * t * t);
    const double u = static_cast<double>(n) / static_cast<double>(length - 1);
    ref.samples[n] = window_value(window, u) * std::sin(phase);
  }
  double peak = 0.0;
  for (double v : ref.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0) {
    for (double& v : ref.samples) v /= peak;
  }
  return ref;
}

FirFilter design_bandpass(double low_cut, double high_cut, std::size_t tap_count, double sample_rate) {
  if (!(low_cut > 0) || !(low_cut < high_cut) || !(high_cut < sample_rate / 2)) {
    throw Error(Errc::InvalidBand,
                fmt::format("need 0 < {} < {} < {}", low_cut, high_cut, sample_rate / 2));
  }
  if (tap_count % 2 == 0) throw Error(Errc::EvenTapCount, fmt::format("{} taps", tap_count));
  if (tap_count < 31) throw Error(Errc::InvalidBand, fmt::format("{} taps, need at least 31", tap_count));

  FirFilter f;
  f.low_cut = low_cut;
  f.high_cut = high_cut;
  f.sample_rate = sample_rate;
  f.taps.resize(tap_count);

  // Hamming puts the -6 dB point on the sinc cutoff. Moving each cutoff out by
  // half the main-lobe width (2·fs/N) keeps the nominal band flat.
  const double widen = 2.0 * sample_rate / static_cast<double>(tap_count);
  const double fl = std::max(low_cut - widen, 0.5 * low_cut) / sample_rate;
  const double fh = std::min(high_cut + widen, 0.5 * (high_cut + sample_rate / 2)) / sample_rate;
  const auto mid = static_cast<long>(tap_count / 2);
  auto sinc_lp = [](double fc, long k) {
    if (k == 0) return 2 * fc;
    const double x = 2 * pi * fc * static_cast<double>(k);
    return std::sin(x) / (pi * static_cast<double>(k));
  };
  for (std::size_t n = 0; n < tap_count; ++n) {
    const long k = static_cast<long>(n) - mid;
    const double hamming = 0.54 - 0.46 * std::cos(2 * pi * static_cast<double>(n) / static_cast<double>(tap_count - 1));
    f.taps[n] = (sinc_lp(fh, k) - sinc_lp(fl, k)) * hamming;
  }
  // Force exact symmetry, then normalize to unity gain at the band centre.
  for (std::size_t n = 0; n < tap_count / 2; ++n) {
    const double avg = 0.5 * (f.taps[n] + f.taps[tap_count - 1 - n]);
    f.taps[n] = f.taps[tap_count - 1 - n] = avg;
  }
  const double gain = magnitude_response(f, 0.5 * (low_cut + high_cut));
  for (double& t : f.taps) t /= gain;
  return f;
}

double magnitude_response(const FirFilter& filter, double freq) {
  const double w = 2 * pi * freq / filter.sample_rate;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < filter.taps.size(); ++n) {
    re += filter.taps[n] * std::cos(w * static_cast<double>(n));
    im -= filter.taps[n] * std::sin(w * static_cast<double>(n));
  }
  return std::hypot(re, im);
}

std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = fft::next_pow2(out_len);
  auto fa = fft::forward(a, n);
  const auto fb = fft::forward(b, n);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  auto full = fft::inverse(fa, n);
  full.resize(out_len);
  return full;
}

std::vector<double> filter_channel(std::span<const double> input, const FirFilter& filter) {
  const std::size_t total = input.size() + filter.taps.size() - 1;
  const auto full = total > kFastConvolutionThreshold ? convolve_fft(input, filter.taps)
                                                      : convolve_direct(input, filter.taps);
  std::vector<double> out(input.size(), 0.0);
  const std::size_t delay = filter.group_delay();
  for (std::size_t n = 0; n < out.size() && n + delay < full.size(); ++n) out[n] = full[n + delay];
  return out;
}

MultichannelFrame apply_filter(const MultichannelFrame& frame, const FirFilter& filter) {
  if (frame.sample_rate != filter.sample_rate) {
    throw Error(Errc::SampleRateMismatch,
                fmt::format("frame {} Hz vs filter {} Hz", frame.sample_rate, filter.sample_rate));
  }
  MultichannelFrame out = frame;
  const std::size_t m = frame.samples_per_channel();
  const std::size_t total = m + filter.taps.size() - 1;
  if (total <= kFastConvolutionThreshold || m == 0) {
    for (auto& ch : out.channels) ch = filter_channel(ch, filter);
    return out;
  }
  // one tap spectrum shared by every channel
  const std::size_t len = fft::next_pow2(total);
  const auto taps = fft::forward(filter.taps, len);
  const std::size_t delay = filter.group_delay();
  for (auto& ch : out.channels) {
    auto spec = fft::forward(ch, len);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= taps[k];
    const auto full = fft::inverse(spec, len);
    for (std::size_t n = 0; n < m; ++n) ch[n] = n + delay < total ? full[n + delay] : 0.0;
  }
  return out;
}

}  // namespace r2usbl::waveform
