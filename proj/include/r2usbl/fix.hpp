#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace r2usbl::fix {

enum class FixQuality { ok, suspect };

std::string_view to_string(FixQuality q);
std::optional<FixQuality> quality_from_string(std::string_view s);

struct NorthEast {
  double north = 0.0;
  double east = 0.0;
};

struct PositionFix {
  std::uint64_t trigger_epoch_ns = 0;
  double tof = 0.0;               // s
  double slant_range = 0.0;       // m
  double relative_bearing = 0.0;  // deg clockwise from bow
  double absolute_bearing = 0.0;  // deg clockwise from north
  double horizontal_range = 0.0;  // m
  double north = 0.0;             // m
  double east = 0.0;              // m
  double gain_db = 0.0;
  double snr_db = 0.0;
  FixQuality quality = FixQuality::ok;
};

struct ErrorMetrics {
  double rmse_north = 0.0;
  double rmse_east = 0.0;
  double rmse_horizontal = 0.0;
  std::size_t sample_count = 0;
};

/// r = c·(tof − clock_correction).
double slant_range(double tof, double c, double clock_correction = 0.0);

/// √(slant² − Δz²).
double horizontal_project(double slant, double depth_difference);

/// Beacon position from horizontal range and bearing, azimuth clockwise from north.
NorthEast absolute_position(double horizontal_range, double relative_bearing, double heading,
                            NorthEast receiver = {});

/// The array frame is x forward, y starboard, so the beamformer's
/// counter-clockwise-from-x angle, seen from above with depth down, is already
/// clockwise from the bow. Only wrapping is needed.
double relative_bearing_from_doa(double theta_deg);

ErrorMetrics rmse(std::span<const NorthEast> estimates, std::span<const NorthEast> truth);

}  // namespace r2usbl::fix
