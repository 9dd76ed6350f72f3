#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace r2usbl::array {

/// Element position in the vehicle (body) frame: x toward the bow, y toward starboard.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Uniform circular array. Element a (1-based) sits at angle 2πa/A, so the last
/// element lies on the +x axis.
struct ArrayGeometry {
  double radius = 0.0;
  std::vector<Point2> positions;

  std::size_t element_count() const { return positions.size(); }
};

struct WaterProperties {
  double temperature = 15.0;  // °C
  double salinity = 35.0;     // PSU
  double depth = 0.0;         // m
  double latitude = 45.0;     // deg
};

/// Either a fixed sound speed or the water properties it is computed from.
using SoundSpeedSource = std::variant<double, WaterProperties>;

ArrayGeometry circular_array(double radius, std::size_t element_count);

/// NPL (Leroy, Robinson & Goldsmith 2008) sound speed in sea water, m/s.
double npl_sound_speed(const WaterProperties& props);

/// A fixed speed is returned as given (must lie in [1400, 1600] m/s).
double sound_speed(const SoundSpeedSource& source);

/// Relative arrival advance per element for a wavefront from `theta_deg`
/// (measured from +x toward +y): (x·cosθ + y·sinθ)/c.
std::vector<double> steering_delays(const ArrayGeometry& geometry, double theta_deg, double c);

double deg2rad(double deg);
double rad2deg(double rad);
/// Wraps into [0, 360).
double wrap360(double deg);

}  // namespace r2usbl::array
