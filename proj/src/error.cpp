#include "r2usbl/error.hpp"

namespace r2usbl {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::BandExceedsNyquist: return "BandExceedsNyquist";
    case Errc::NonPositiveDuration: return "NonPositiveDuration";
    case Errc::InvalidBand: return "InvalidBand";
    case Errc::EvenTapCount: return "EvenTapCount";
    case Errc::SampleRateMismatch: return "SampleRateMismatch";
    case Errc::TooFewElements: return "TooFewElements";
    case Errc::OutOfValidityRange: return "OutOfValidityRange";
    case Errc::ReferenceLongerThanFrame: return "ReferenceLongerThanFrame";
    case Errc::NoPeakAboveFloor: return "NoPeakAboveFloor";
    case Errc::SegmentOutOfFrame: return "SegmentOutOfFrame";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::GeometryMismatch: return "GeometryMismatch";
    case Errc::EmptyBand: return "EmptyBand";
    case Errc::AmbiguousPeak: return "AmbiguousPeak";
    case Errc::InvalidScene: return "InvalidScene";
    case Errc::FrameTooShort: return "FrameTooShort";
    case Errc::NonPositiveRange: return "NonPositiveRange";
    case Errc::InvalidGeometry: return "InvalidGeometry";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptySeries: return "EmptySeries";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::BadSentence: return "BadSentence";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace r2usbl
