#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace r2usbl {

enum class FrameSource { simulated, replayed, live };

/// One PPS-triggered block of samples, one row per hydrophone.
struct MultichannelFrame {
  std::vector<std::vector<double>> channels;
  double sample_rate = 0.0;
  std::uint64_t trigger_epoch_ns = 0;
  double gain_db = 0.0;
  FrameSource source = FrameSource::simulated;

  std::size_t channel_count() const { return channels.size(); }
  std::size_t samples_per_channel() const { return channels.empty() ? 0 : channels.front().size(); }
};

}  // namespace r2usbl
