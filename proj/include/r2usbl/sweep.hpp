#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "r2usbl/config.hpp"
#include "r2usbl/fix.hpp"

namespace r2usbl::sweep {

/// One range/bearing cell of the tank-style grid.
struct SweepRow {
  double true_range = 0.0;
  double true_bearing = 0.0;
  double est_range = 0.0;
  double est_bearing = 0.0;
  double range_error = 0.0;    // m, estimate − truth
  double bearing_error = 0.0;  // deg, wrapped into (−180, 180]
  fix::NorthEast true_ne;
  fix::NorthEast est_ne;
  bool ok = false;
  std::string failure;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  fix::ErrorMetrics metrics;  // over successful cells
  double range_rmse = 0.0;
  double bearing_rmse = 0.0;
  double max_relative_range_error = 0.0;
  double max_abs_bearing_error = 0.0;
  std::size_t failures = 0;
};

/// Noiseless, ideal-clock scan of every (range, bearing) cell through the full
/// pipeline. Per-cell failures are recorded, not thrown.
SweepReport run_sweep(const config::Config& config);

void write_sweep_csv(const SweepReport& report, std::ostream& out);

/// Signed angular difference a − b wrapped into (−180, 180].
double angle_difference(double a, double b);

}  // namespace r2usbl::sweep
