#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "r2usbl/frame.hpp"
#include "r2usbl/waveform.hpp"

namespace r2usbl::detector {

/// Matched-filter output for every channel of one frame.
struct CorrelationResult {
  std::vector<std::vector<double>> z;  // each of length N+M-1
  std::vector<std::size_t> peak_index;
  std::vector<double> peak_value;
  std::vector<double> noise_floor;      // robust sigma, 1.4826·MAD
  std::vector<double> normalized_peak;  // peak / sqrt(Σx² · Σy² under the reference window)
  std::size_t reference_length = 0;
  double reference_energy = 0.0;

  std::size_t channel_count() const { return z.size(); }
};

enum class TofQuality { ok, suspect };

struct TofEstimate {
  double tof = 0.0;                         // s
  std::vector<double> per_channel_peaks;    // sample indices (fractional when refined)
  double spread = 0.0;                      // s
  TofQuality quality = TofQuality::ok;
};

struct TofOptions {
  double detection_threshold = 0.3;
  /// Band-limited interpolation of each correlation peak. Off reproduces the
  /// plain mean of integer argmax indices.
  bool subsample = false;
  /// Array transit bound 2R/c in seconds; the spread limit adds two samples to it.
  double transit_bound = 0.0;
};

struct Segment {
  std::vector<std::vector<double>> rows;  // A × N
  std::size_t start = 0;
  bool truncated = false;
};

/// z[n] = Σ_m y[m]·x[m−n] for n in [0, N+M−2], computed by FFT.
std::vector<double> matched_filter(std::span<const double> channel, std::span<const double> reference);
std::vector<double> matched_filter(std::span<const double> channel, const waveform::ReferenceWaveform& ref);

/// Index of the maximum, lowest index on ties.
std::size_t argmax(std::span<const double> values);

/// Continuous-time peak location near `index`: the carrier peak closest to the
/// envelope maximum, refined by Kaiser-windowed sinc interpolation.
double refine_peak(std::span<const double> z, std::size_t index);

CorrelationResult correlate(const MultichannelFrame& frame, const waveform::ReferenceWaveform& ref);

TofEstimate estimate_tof(const CorrelationResult& corr, double sample_rate, std::size_t element_count,
                         const TofOptions& options = {});

/// Slices `filtered` (the bandpassed frame) at round(mean peak index), one
/// reference length per channel. Samples past the frame end are zero.
Segment extract_segment(const MultichannelFrame& filtered, const TofEstimate& tof, std::size_t ref_length);

/// 20·log10(peak / robust sigma), capped at kSnrCapDb.
double estimate_snr(std::span<const double> z);
/// Per channel from the stored peak and noise floor; a degenerate channel reads −cap.
std::vector<double> estimate_snr(const CorrelationResult& corr);

inline constexpr double kSnrCapDb = 60.0;

}  // namespace r2usbl::detector
