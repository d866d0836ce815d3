#include "bathy/error.hpp"

namespace bathy {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedRecord: return "TruncatedRecord";
    case Errc::WidthMismatch: return "WidthMismatch";
    case Errc::NonFiniteField: return "NonFiniteField";
    case Errc::NonMonotonicTime: return "NonMonotonicTime";
    case Errc::FieldOutOfRange: return "FieldOutOfRange";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::FieldCount: return "FieldCount";
    case Errc::NumericParse: return "NumericParse";
    case Errc::LatitudeOutOfRange: return "LatitudeOutOfRange";
    case Errc::LongitudeOutOfRange: return "LongitudeOutOfRange";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NoUsablePing: return "NoUsablePing";
    case Errc::AlignmentMismatch: return "AlignmentMismatch";
    case Errc::MalformedPly: return "MalformedPly";
    case Errc::DegeneratePath: return "DegeneratePath";
    case Errc::ChannelOutOfRange: return "ChannelOutOfRange";
    case Errc::MalformedDetection: return "MalformedDetection";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace bathy
