#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bathy/sonar_log.hpp"

namespace bathy {

inline constexpr double kDefaultThreshold = 0.3;

enum class Side : std::uint8_t { Positive, Negative };

/// Scanline scaled into [0, 1] with the deadzone band around `center` zeroed.
struct NormalizedScanline {
  std::vector<float> values;
  std::uint32_t center = 0;  // W / 2, rounded down
  std::uint32_t deadzone_halfwidth = 0;
};

struct FirstReturn {
  Side side = Side::Positive;
  std::uint32_t pixels = 0;  // offset from center, >= 1 when found
  bool found = false;

  bool operator==(const FirstReturn&) const = default;
};

struct ReturnPair {
  FirstReturn positive{Side::Positive};
  FirstReturn negative{Side::Negative};

  const FirstReturn& operator[](Side side) const {
    return side == Side::Positive ? positive : negative;
  }
  bool operator==(const ReturnPair&) const = default;
};

/// Zeroes the deadzone, then divides by intensity_max and clamps into [0, 1].
/// Throws WidthMismatch when the sample count differs from the config width.
NormalizedScanline normalize(std::span<const float> raw, const SensorConfig& config);

/// Walks outward from the first pixel past the deadzone and reports the
/// offset of the first value >= threshold. Threshold must lie in (0, 1).
FirstReturn first_return(const NormalizedScanline& line, double threshold, Side side);

ReturnPair first_returns(const NormalizedScanline& line, double threshold);

/// Both-side first returns for every ping, aligned by ping index.
std::vector<ReturnPair> first_return_overlay(const SurveyLog& log, double threshold,
                                             unsigned threads = 1);

}  // namespace bathy
