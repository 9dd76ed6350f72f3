#include "r2usbl/sentence.hpp"

#include <charconv>
#include <cstdlib>
#include <vector>

#include <fmt/format.h>

#include "r2usbl/error.hpp"

namespace r2usbl::sentence {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s, const char* field) {
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) {
    throw Error(Errc::BadSentence, fmt::format("field {} '{}' is not a number", field, s));
  }
  return v;
}

std::uint64_t epoch_from(std::string_view s) {
  const auto dot = s.find('.');
  if (dot == std::string_view::npos || s.size() - dot - 1 != 9) {
    throw Error(Errc::BadSentence, fmt::format("epoch '{}' needs 9 decimals", s));
  }
  std::uint64_t sec = 0;
  std::uint64_t ns = 0;
  const auto a = std::from_chars(s.data(), s.data() + dot, sec);
  const auto b = std::from_chars(s.data() + dot + 1, s.data() + s.size(), ns);
  if (a.ec != std::errc{} || a.ptr != s.data() + dot || b.ec != std::errc{} || b.ptr != s.data() + s.size()) {
    throw Error(Errc::BadSentence, fmt::format("epoch '{}' malformed", s));
  }
  return sec * 1'000'000'000ULL + ns;
}

}  // namespace

std::uint8_t checksum(std::string_view body) {
  std::uint8_t x = 0;
  for (char ch : body) x ^= static_cast<std::uint8_t>(ch);
  return x;
}

std::string format_fix_sentence(const fix::PositionFix& f) {
  const std::string body =
      fmt::format("{},{}.{:09d},{:.6f},{:.2f},{:.2f},{:.2f},{},{:.1f},{}", kTalker, f.trigger_epoch_ns / 1'000'000'000ULL,
                  f.trigger_epoch_ns % 1'000'000'000ULL, f.tof, f.slant_range, f.relative_bearing, f.absolute_bearing,
                  f.gain_db, f.snr_db, fix::to_string(f.quality));
  return fmt::format("${}*{:02X}\r\n", body, checksum(body));
}

fix::PositionFix parse_fix_sentence(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  if (line.empty() || line.front() != '$') throw Error(Errc::BadSentence, "missing '$'");
  const auto star = line.rfind('*');
  if (star == std::string_view::npos || line.size() - star - 1 != 2) {
    throw Error(Errc::BadSentence, "missing '*HH' checksum");
  }
  const auto body = line.substr(1, star - 1);
  unsigned expected = 0;
  const auto hex = line.substr(star + 1);
  const auto r = std::from_chars(hex.data(), hex.data() + hex.size(), expected, 16);
  if (r.ec != std::errc{} || r.ptr != hex.data() + hex.size()) throw Error(Errc::BadSentence, "bad checksum digits");
  if (expected != checksum(body)) {
    throw Error(Errc::BadSentence, fmt::format("checksum {:02X} != {:02X}", expected, checksum(body)));
  }
  const auto fields = split(body, ',');
  if (fields.size() != 9 || fields[0] != kTalker) {
    throw Error(Errc::BadSentence, fmt::format("expected 9 fields starting with {}", kTalker));
  }
  fix::PositionFix f;
  f.trigger_epoch_ns = epoch_from(fields[1]);
  f.tof = to_double(fields[2], "tof");
  f.slant_range = to_double(fields[3], "range");
  f.relative_bearing = to_double(fields[4], "relative bearing");
  f.absolute_bearing = to_double(fields[5], "absolute bearing");
  f.gain_db = to_double(fields[6], "gain");
  f.snr_db = to_double(fields[7], "snr");
  const auto q = fix::quality_from_string(fields[8]);
  if (!q) throw Error(Errc::BadSentence, fmt::format("unknown quality '{}'", fields[8]));
  f.quality = *q;
  return f;
}

}  // namespace r2usbl::sentence
