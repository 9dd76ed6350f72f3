#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "r2usbl/array.hpp"

namespace r2usbl::beamformer {

using Complex = std::complex<double>;
using SegmentRows = std::vector<std::vector<double>>;

struct Band {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Broadband beam power B(θ) over a uniform look-angle grid.
struct BeamPattern {
  std::vector<double> angles;  // deg, strictly increasing
  std::vector<double> powers;
  Band band;
  double bin_width = 0.0;  // Hz
};

struct DoaEstimate {
  double theta_hat = 0.0;  // deg in [0, 360), math convention of the array frame
  double peak_power = 0.0;
  double sidelobe_ratio_db = 0.0;
};

/// Per-element spectra of a segment matrix. Each row is zero-padded to the
/// next power of two ≥ 2N. Bins use the e^{+j2πfn/fs} kernel, under which a
/// wavefront arriving from θ is phase-aligned by the steering factor
/// e^{+j2πfΔτ_a(θ)}.
struct ElementSpectra {
  std::vector<std::vector<Complex>> bins;  // element × (L/2 + 1)
  std::size_t transform_length = 0;
  double sample_rate = 0.0;

  double bin_width() const { return sample_rate / static_cast<double>(transform_length); }
};

std::size_t transform_length_for(std::size_t segment_length);

ElementSpectra element_spectra(const SegmentRows& segments, double sample_rate);

/// B(θ,f) = (1/A)·Σ_a X_a(f)·e^{j2πfΔτ_a(θ)} for every non-negative bin.
std::vector<Complex> beam_power_spectrum(const ElementSpectra& spectra, const array::ArrayGeometry& geometry,
                                         double c, double theta_deg);
std::vector<Complex> beam_power_spectrum(const SegmentRows& segments, double sample_rate,
                                         const array::ArrayGeometry& geometry, double c, double theta_deg);

/// B(θ) = Σ_{f ∈ [f1, f2]} |B(θ,f)|²·Δf, positive-frequency bins only.
BeamPattern broadband_beam_power(const ElementSpectra& spectra, const array::ArrayGeometry& geometry, double c,
                                 const std::vector<double>& theta_grid, Band band);
BeamPattern broadband_beam_power(const SegmentRows& segments, double sample_rate,
                                 const array::ArrayGeometry& geometry, double c,
                                 const std::vector<double>& theta_grid, Band band);

/// Uniform grid over [0, 360) with the given step.
std::vector<double> look_angle_grid(double step_deg);

/// Grid argmax refined by a parabola through the log-power of the peak and
/// its two circular neighbours. With `refine` off the grid angle is returned.
DoaEstimate estimate_doa(const BeamPattern& pattern, bool refine = true);

}  // namespace r2usbl::beamformer
