#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bathy {

/// Failure categories raised by the library. Each module throws `Error`
/// tagged with one of these so callers can branch on the kind without
/// parsing messages.
enum class Errc {
  // sonar-log
  BadMagic,
  TruncatedRecord,
  WidthMismatch,
  NonFiniteField,
  NonMonotonicTime,
  FieldOutOfRange,
  HeaderMismatch,
  FieldCount,
  NumericParse,
  // geo
  LatitudeOutOfRange,
  LongitudeOutOfRange,
  // trajectory
  EmptyInput,
  NoUsablePing,
  // pointcloud
  AlignmentMismatch,
  MalformedPly,
  // synth
  DegeneratePath,
  ChannelOutOfRange,
  // detect-eval
  MalformedDetection,
  // shared
  InvalidArgument,
  Io,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace bathy
