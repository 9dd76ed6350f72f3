#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "r2usbl/frame.hpp"

namespace r2usbl::waveform {

struct Window {
  enum class Kind { rectangular, tukey };
  Kind kind = Kind::tukey;
  double alpha = 0.1;  // tapered fraction, tukey only

  static Window rectangular() { return {Kind::rectangular, 0.0}; }
  static Window tukey(double alpha) { return {Kind::tukey, alpha}; }
};

/// Transmitted LFM chirp, unit peak amplitude.
struct ReferenceWaveform {
  std::vector<double> samples;
  double f_start = 0.0;
  double f_stop = 0.0;
  double duration = 0.0;
  double sample_rate = 0.0;
  Window window;

  std::size_t length() const { return samples.size(); }
  double energy() const;
  double instantaneous_frequency(double t) const { return f_start + (f_stop - f_start) * t / duration; }
};

/// Linear-phase FIR; group delay is (taps.size()-1)/2 samples.
struct FirFilter {
  std::vector<double> taps;
  double low_cut = 0.0;
  double high_cut = 0.0;
  double sample_rate = 0.0;

  std::size_t group_delay() const { return (taps.size() - 1) / 2; }
};

double window_value(const Window& w, double u);

ReferenceWaveform generate_lfm(double f_start, double f_stop, double duration, double sample_rate,
                               Window window = Window::tukey(0.1));

/// Hamming-windowed sinc bandpass with unity gain at the band centre.
FirFilter design_bandpass(double low_cut, double high_cut, std::size_t tap_count, double sample_rate);

/// Magnitude of the filter's frequency response at `freq` (Hz).
double magnitude_response(const FirFilter& filter, double freq);

/// Zero-phase filtering of one channel: full convolution advanced by the group delay
/// and cut back to the input length.
std::vector<double> filter_channel(std::span<const double> input, const FirFilter& filter);

MultichannelFrame apply_filter(const MultichannelFrame& frame, const FirFilter& filter);

/// Above this many output samples the filter runs through the FFT path.
inline constexpr std::size_t kFastConvolutionThreshold = 4096;

/// Direct-form and transform-domain linear convolution; both return input+taps-1 samples.
std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b);
std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b);

}  // namespace r2usbl::waveform
