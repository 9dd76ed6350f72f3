#include "r2usbl/clock.hpp"

#include <cmath>

#include <fmt/format.h>

#include "r2usbl/error.hpp"

namespace r2usbl::clock {

void validate(const ClockModel& m) {
  if (!(m.pps_interval > 0)) throw Error(Errc::ValidationError, fmt::format("pps_interval {}", m.pps_interval));
  if (std::abs(m.drift_rate) > kMaxDriftRate) {
    throw Error(Errc::ValidationError, fmt::format("drift_rate {} exceeds {}", m.drift_rate, kMaxDriftRate));
  }
  if (m.random_walk < 0) throw Error(Errc::ValidationError, "random_walk must be non-negative");
}

double clock_offset_at(const ClockModel& m, double elapsed) { return m.initial_offset + m.drift_rate * elapsed; }

double next_trigger(const ClockModel& m, double now) {
  // local(t) = (1 + drift)·t + initial_offset is strictly increasing, so the
  // next edge is the first multiple of the interval at or above local(now).
  const double scale = 1.0 + m.drift_rate;
  const double local_now = scale * now + m.initial_offset;
  double k = std::ceil(local_now / m.pps_interval);
  double t = (k * m.pps_interval - m.initial_offset) / scale;
  if (t < now) t = ((k + 1) * m.pps_interval - m.initial_offset) / scale;
  return t;
}

ClockRealization::ClockRealization(const ClockModel& model, std::uint64_t seed) : model_(model), rng_(seed) {
  validate(model_);
}

double ClockRealization::offset_at(double elapsed) {
  if (model_.random_walk > 0 && elapsed > last_time_) {
    std::normal_distribution<double> normal(0.0, 1.0);
    walk_ += model_.random_walk * std::sqrt(elapsed - last_time_) * normal(rng_);
    last_time_ = elapsed;
  }
  return clock_offset_at(model_, elapsed) + walk_;
}

}  // namespace r2usbl::clock
