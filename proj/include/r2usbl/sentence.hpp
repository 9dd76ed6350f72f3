#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "r2usbl/fix.hpp"

// Fix output line, one per ping:
//
//   $R2UBL,<epoch_s>,<tof_s>,<range_m>,<rel_bearing_deg>,<abs_bearing_deg>,<gain_db>,<snr_db>,<quality>*HH\r\n
//
// epoch with 9 decimals, tof 6, range and bearings 2, snr 1, gain in shortest
// form. HH is the XOR of every byte between '$' and '*', uppercase hex.
namespace r2usbl::sentence {

inline constexpr std::string_view kTalker = "R2UBL";

std::uint8_t checksum(std::string_view body);

std::string format_fix_sentence(const fix::PositionFix& fix);

/// Fields carried by a sentence; the rest of PositionFix stays default.
fix::PositionFix parse_fix_sentence(std::string_view line);

}  // namespace r2usbl::sentence
