#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "r2usbl/frame.hpp"

// Raw capture records. Layout, little-endian:
//
//   off  size  field
//     0     4  magic "R2UB"
//     4     2  version (1)
//     6     2  channel_count
//     8     4  sample_rate, Hz
//    12     4  samples_per_channel
//    16     2  sample_format (0 = int16, 1 = float32)
//    18     2  gain_db, signed
//    20     8  trigger_epoch, ns
//    28     4  reserved, zero
//    32        samples, channel-interleaved
//
// int16 samples map full scale ±1.0 to ±32767.
namespace r2usbl::rawframe {

enum class SampleFormat : std::uint16_t { int16 = 0, float32 = 1 };

inline constexpr std::size_t kHeaderSize = 32;
inline constexpr std::uint16_t kVersion = 1;
inline constexpr char kMagic[4] = {'R', '2', 'U', 'B'};

std::size_t sample_size(SampleFormat format);

std::vector<std::uint8_t> encode_frame(const MultichannelFrame& frame, SampleFormat format);

/// Decodes one record; trailing bytes beyond the record are ignored.
MultichannelFrame decode_frame(std::span<const std::uint8_t> bytes);

/// Total record size implied by a header.
std::size_t record_size(std::span<const std::uint8_t> header);

void write_frame(std::ostream& out, const MultichannelFrame& frame, SampleFormat format);

/// Next record from a stream; nullopt at a clean end of stream.
std::optional<MultichannelFrame> read_frame(std::istream& in);

}  // namespace r2usbl::rawframe
