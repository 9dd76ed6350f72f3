#pragma once

namespace r2usbl::agc {

/// Two-threshold gain controller. Thresholds are in the units of the peak
/// indicator fed to agc_update.
struct AgcState {
  double gain_db = 20.0;
  double lower_threshold = 0.05;
  double upper_threshold = 0.5;
  double step_db = 6.0;
  double min_gain_db = 0.0;
  double max_gain_db = 48.0;
};

enum class GainCommand { raise, lower, hold };

struct AgcUpdate {
  AgcState state;
  GainCommand command = GainCommand::hold;
  bool saturated = false;  // the command hit a gain bound
};

void validate(const AgcState& state);

AgcUpdate agc_update(const AgcState& state, double peak);

/// Amplitude indicator from a matched-filter peak: peak / Σx², i.e. the
/// least-squares amplitude of the reference at that lag.
double peak_indicator(double correlation_peak, double reference_energy);

const char* to_string(GainCommand command);

}  // namespace r2usbl::agc
