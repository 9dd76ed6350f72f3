#include "r2usbl/fix.hpp"

#include <cmath>

#include <fmt/format.h>

#include "r2usbl/array.hpp"
#include "r2usbl/error.hpp"

namespace r2usbl::fix {

std::string_view to_string(FixQuality q) { return q == FixQuality::ok ? "ok" : "suspect"; }

std::optional<FixQuality> quality_from_string(std::string_view s) {
  if (s == "ok") return FixQuality::ok;
  if (s == "suspect") return FixQuality::suspect;
  return std::nullopt;
}

double slant_range(double tof, double c, double clock_correction) {
  if (!(c > 0)) throw Error(Errc::NonPositiveRange, fmt::format("sound speed {}", c));
  const double r = c * (tof - clock_correction);
  if (!(r > 0)) throw Error(Errc::NonPositiveRange, fmt::format("range {} m", r));
  return r;
}

double horizontal_project(double slant, double depth_difference) {
  if (!(slant > 0) || std::abs(depth_difference) > slant) {
    throw Error(Errc::InvalidGeometry, fmt::format("depth difference {} m with slant {} m", depth_difference, slant));
  }
  return std::sqrt(slant * slant - depth_difference * depth_difference);
}

NorthEast absolute_position(double horizontal_range, double relative_bearing, double heading, NorthEast receiver) {
  const double az = array::deg2rad(array::wrap360(heading + relative_bearing));
  return {receiver.north + horizontal_range * std::cos(az), receiver.east + horizontal_range * std::sin(az)};
}

double relative_bearing_from_doa(double theta_deg) { return array::wrap360(theta_deg); }

ErrorMetrics rmse(std::span<const NorthEast> estimates, std::span<const NorthEast> truth) {
  if (estimates.size() != truth.size()) {
    throw Error(Errc::LengthMismatch, fmt::format("{} estimates vs {} truth", estimates.size(), truth.size()));
  }
  if (estimates.empty()) throw Error(Errc::EmptySeries, "no samples");
  double sn = 0.0;
  double se = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double dn = estimates[i].north - truth[i].north;
    const double de = estimates[i].east - truth[i].east;
    sn += dn * dn;
    se += de * de;
  }
  const double count = static_cast<double>(estimates.size());
  ErrorMetrics m;
  m.sample_count = estimates.size();
  m.rmse_north = std::sqrt(sn / count);
  m.rmse_east = std::sqrt(se / count);
  m.rmse_horizontal = std::sqrt((sn + se) / count);
  return m;
}

}  // namespace r2usbl::fix
