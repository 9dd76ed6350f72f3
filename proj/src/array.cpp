#include "r2usbl/array.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "r2usbl/error.hpp"

namespace r2usbl::array {

using std::numbers::pi;

double deg2rad(double deg) { return deg * pi / 180.0; }
double rad2deg(double rad) { return rad * 180.0 / pi; }

double wrap360(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0) w += 360.0;
  // fmod of a tiny negative value can round back up to 360
  if (w >= 360.0) w -= 360.0;
  return w;
}

ArrayGeometry circular_array(double radius, std::size_t element_count) {
  if (element_count < 3) throw Error(Errc::TooFewElements, fmt::format("{} elements", element_count));
  if (!(radius > 0)) throw Error(Errc::InvalidGeometry, fmt::format("radius {}", radius));
  ArrayGeometry g;
  g.radius = radius;
  g.positions.reserve(element_count);
  const double count = static_cast<double>(element_count);
  for (std::size_t a = 1; a <= element_count; ++a) {
    const double phi = 2 * pi * static_cast<double>(a) / count;
    g.positions.push_back({radius * std::cos(phi), radius * std::sin(phi)});
  }
  // cos(2π) and sin(2π) are not exact in floating point
  g.positions.back() = {radius, 0.0};
  return g;
}

double npl_sound_speed(const WaterProperties& p) {
  const double T = p.temperature;
  const double S = p.salinity;
  const double Z = p.depth;
  if (T < -2 || T > 40) throw Error(Errc::OutOfValidityRange, fmt::format("temperature {} °C", T));
  if (S < 0 || S > 42) throw Error(Errc::OutOfValidityRange, fmt::format("salinity {} PSU", S));
  if (Z < 0) throw Error(Errc::OutOfValidityRange, fmt::format("depth {} m", Z));
  if (p.latitude < -90 || p.latitude > 90) {
    throw Error(Errc::OutOfValidityRange, fmt::format("latitude {} deg", p.latitude));
  }
  return 1402.5 + 5 * T - 5.44e-2 * T * T + 2.1e-4 * T * T * T + 1.33 * S - 1.23e-2 * S * T +
         8.7e-5 * S * T * T + 1.56e-2 * Z + 2.55e-7 * Z * Z - 7.3e-12 * Z * Z * Z +
         1.2e-6 * Z * (p.latitude - 45) - 9.5e-13 * T * Z * Z * Z + 3e-7 * T * T * Z +
         1.43e-5 * S * Z;
}

double sound_speed(const SoundSpeedSource& source) {
  if (const auto* fixed = std::get_if<double>(&source)) {
    if (*fixed < 1400 || *fixed > 1600) {
      throw Error(Errc::OutOfValidityRange, fmt::format("fixed sound speed {} m/s", *fixed));
    }
    return *fixed;
  }
  return npl_sound_speed(std::get<WaterProperties>(source));
}

std::vector<double> steering_delays(const ArrayGeometry& geometry, double theta_deg, double c) {
  const double th = deg2rad(theta_deg);
  const double ux = std::cos(th);
  const double uy = std::sin(th);
  std::vector<double> d;
  d.reserve(geometry.element_count());
  for (const auto& p : geometry.positions) d.push_back((p.x * ux + p.y * uy) / c);
  return d;
}

}  // namespace r2usbl::array
