#include "r2usbl/raw_frame.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "r2usbl/error.hpp"

namespace r2usbl::rawframe {
namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>((u >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(in[offset + i]) << (8 * i));
  return static_cast<T>(u);
}

struct Header {
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint32_t samples = 0;
  SampleFormat format = SampleFormat::int16;
  std::int16_t gain_db = 0;
  std::uint64_t epoch = 0;
};

Header parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) {
    throw Error(Errc::TruncatedPayload, fmt::format("{} bytes, header needs {}", bytes.size(), kHeaderSize));
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin(),
                  [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; })) {
    throw Error(Errc::BadMagic, "not an R2UB record");
  }
  const auto version = get_le<std::uint16_t>(bytes, 4);
  if (version != kVersion) throw Error(Errc::UnsupportedVersion, fmt::format("version {}", version));
  Header h;
  h.channels = get_le<std::uint16_t>(bytes, 6);
  h.sample_rate = get_le<std::uint32_t>(bytes, 8);
  h.samples = get_le<std::uint32_t>(bytes, 12);
  const auto fmt_code = get_le<std::uint16_t>(bytes, 16);
  if (fmt_code > 1) throw Error(Errc::UnsupportedVersion, fmt::format("sample format {}", fmt_code));
  h.format = static_cast<SampleFormat>(fmt_code);
  h.gain_db = get_le<std::int16_t>(bytes, 18);
  h.epoch = get_le<std::uint64_t>(bytes, 20);
  return h;
}

}  // namespace

std::size_t sample_size(SampleFormat format) { return format == SampleFormat::int16 ? 2 : 4; }

std::vector<std::uint8_t> encode_frame(const MultichannelFrame& frame, SampleFormat format) {
  const std::size_t channels = frame.channel_count();
  const std::size_t samples = frame.samples_per_channel();
  for (const auto& ch : frame.channels) {
    if (ch.size() != samples) throw Error(Errc::LengthMismatch, "channels differ in length");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + channels * samples * sample_size(format));
  for (char c : kMagic) out.push_back(static_cast<std::uint8_t>(c));
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(channels));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(std::llround(frame.sample_rate)));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(samples));
  put_le<std::uint16_t>(out, static_cast<std::uint16_t>(format));
  put_le<std::int16_t>(out, static_cast<std::int16_t>(std::llround(frame.gain_db)));
  put_le<std::uint64_t>(out, frame.trigger_epoch_ns);
  put_le<std::uint32_t>(out, 0);

  for (std::size_t n = 0; n < samples; ++n) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = frame.channels[c][n];
      if (format == SampleFormat::int16) {
        const double scaled = std::clamp(v, -1.0, 1.0) * 32767.0;
        put_le<std::int16_t>(out, static_cast<std::int16_t>(std::lround(scaled)));
      } else {
        put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
      }
    }
  }
  return out;
}

std::size_t record_size(std::span<const std::uint8_t> header) {
  const auto h = parse_header(header);
  return kHeaderSize + std::size_t{h.channels} * h.samples * sample_size(h.format);
}

MultichannelFrame decode_frame(std::span<const std::uint8_t> bytes) {
  const auto h = parse_header(bytes);
  const std::size_t size = sample_size(h.format);
  const std::size_t payload = std::size_t{h.channels} * h.samples * size;
  if (bytes.size() < kHeaderSize + payload) {
    throw Error(Errc::TruncatedPayload,
                fmt::format("payload {} bytes, header promises {}", bytes.size() - kHeaderSize, payload));
  }
  MultichannelFrame frame;
  frame.sample_rate = h.sample_rate;
  frame.gain_db = h.gain_db;
  frame.trigger_epoch_ns = h.epoch;
  frame.source = FrameSource::replayed;
  frame.channels.assign(h.channels, std::vector<double>(h.samples));
  std::size_t off = kHeaderSize;
  for (std::size_t n = 0; n < h.samples; ++n) {
    for (std::size_t c = 0; c < h.channels; ++c) {
      if (h.format == SampleFormat::int16) {
        frame.channels[c][n] = get_le<std::int16_t>(bytes, off) / 32767.0;
      } else {
        frame.channels[c][n] = std::bit_cast<float>(get_le<std::uint32_t>(bytes, off));
      }
      off += size;
    }
  }
  return frame;
}

void write_frame(std::ostream& out, const MultichannelFrame& frame, SampleFormat format) {
  const auto bytes = encode_frame(frame, format);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "failed to write raw frame");
}

std::optional<MultichannelFrame> read_frame(std::istream& in) {
  std::vector<std::uint8_t> bytes(kHeaderSize);
  in.read(reinterpret_cast<char*>(bytes.data()), kHeaderSize);
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got == 0) return std::nullopt;
  if (got < kHeaderSize) throw Error(Errc::TruncatedPayload, fmt::format("partial header of {} bytes", got));
  const std::size_t total = record_size(bytes);
  bytes.resize(total);
  in.read(reinterpret_cast<char*>(bytes.data() + kHeaderSize), static_cast<std::streamsize>(total - kHeaderSize));
  if (static_cast<std::size_t>(in.gcount()) != total - kHeaderSize) {
    throw Error(Errc::TruncatedPayload, "record ends early");
  }
  return decode_frame(bytes);
}

}  // namespace r2usbl::rawframe
