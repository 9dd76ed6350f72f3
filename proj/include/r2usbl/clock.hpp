#pragma once

#include <cstdint>
#include <random>

namespace r2usbl::clock {

/// Disciplined oscillator as seen against true time:
///   local_time = true_time + offset(true_time)
///   offset(t)  = initial_offset + drift_rate·t
/// A receiver-minus-beacon offset adds directly to the measured time of flight.
struct ClockModel {
  double initial_offset = 0.0;  // s
  double drift_rate = 0.0;      // s/s
  double pps_interval = 1.0;    // s
  double random_walk = 0.0;     // s/√s, 0 disables
};

inline constexpr double kMaxDriftRate = 1e-6;

void validate(const ClockModel& model);

double clock_offset_at(const ClockModel& model, double elapsed);

/// True time of the first local PPS edge at or after `now` (true time).
double next_trigger(const ClockModel& model, double now);

/// Range error produced by an uncorrected timing offset.
inline double range_bias(double offset, double sound_speed) { return offset * sound_speed; }

/// One realization of a clock: the linear model plus an optional seeded
/// random walk. Queries must be made at non-decreasing elapsed times.
class ClockRealization {
 public:
  ClockRealization(const ClockModel& model, std::uint64_t seed);

  double offset_at(double elapsed);
  const ClockModel& model() const { return model_; }

 private:
  ClockModel model_;
  std::mt19937_64 rng_;
  double last_time_ = 0.0;
  double walk_ = 0.0;
};

}  // namespace r2usbl::clock
