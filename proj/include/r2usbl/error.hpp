#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace r2usbl {

enum class Errc {
  // waveform
  BandExceedsNyquist,
  NonPositiveDuration,
  InvalidBand,
  EvenTapCount,
  SampleRateMismatch,
  // array
  TooFewElements,
  OutOfValidityRange,
  // detector
  ReferenceLongerThanFrame,
  NoPeakAboveFloor,
  SegmentOutOfFrame,
  DegenerateInput,
  // beamformer
  GeometryMismatch,
  EmptyBand,
  AmbiguousPeak,
  // chansim
  InvalidScene,
  FrameTooShort,
  // fix
  NonPositiveRange,
  InvalidGeometry,
  LengthMismatch,
  EmptySeries,
  // io
  ParseError,
  ValidationError,
  UnknownKey,
  BadMagic,
  UnsupportedVersion,
  TruncatedPayload,
  BadSentence,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace r2usbl
