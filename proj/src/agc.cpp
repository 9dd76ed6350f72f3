#include "r2usbl/agc.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "r2usbl/error.hpp"

namespace r2usbl::agc {

void validate(const AgcState& s) {
  if (!(s.min_gain_db <= s.gain_db && s.gain_db <= s.max_gain_db)) {
    throw Error(Errc::ValidationError,
                fmt::format("agc gain {} outside [{}, {}]", s.gain_db, s.min_gain_db, s.max_gain_db));
  }
  if (!(s.lower_threshold < s.upper_threshold)) {
    throw Error(Errc::ValidationError, "agc lower threshold must be below upper threshold");
  }
  if (!(s.step_db > 0)) throw Error(Errc::ValidationError, "agc step must be positive");
}

AgcUpdate agc_update(const AgcState& state, double peak) {
  AgcUpdate out;
  out.state = state;
  double target = state.gain_db;
  if (peak < state.lower_threshold) {
    out.command = GainCommand::raise;
    target = state.gain_db + state.step_db;
  } else if (peak > state.upper_threshold) {
    out.command = GainCommand::lower;
    target = state.gain_db - state.step_db;
  } else {
    return out;
  }
  out.state.gain_db = std::clamp(target, state.min_gain_db, state.max_gain_db);
  out.saturated = out.state.gain_db != target;
  return out;
}

double peak_indicator(double correlation_peak, double reference_energy) {
  return reference_energy > 0 ? std::max(0.0, correlation_peak) / reference_energy : 0.0;
}

const char* to_string(GainCommand command) {
  switch (command) {
    case GainCommand::raise: return "raise";
    case GainCommand::lower: return "lower";
    case GainCommand::hold: return "hold";
  }
  return "hold";
}

}  // namespace r2usbl::agc
