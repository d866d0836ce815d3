#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bathy {

inline constexpr std::uint32_t kDefaultScanlineWidth = 700;
inline constexpr std::uint32_t kDefaultDeadzoneHalfwidth = 10;
inline constexpr double kDefaultIntensityMax = 2.14e9;
inline constexpr double kDefaultAlpha2Deg = 30.0;

/// Sensor parameters that do not travel in the log itself. The same log can
/// be reprocessed under different beam-angle or deadzone assumptions.
struct SensorConfig {
  double alpha2 = kDefaultAlpha2Deg * std::numbers::pi / 180.0;  // radians from vertical
  std::uint32_t scanline_width = kDefaultScanlineWidth;
  std::uint32_t deadzone_halfwidth = kDefaultDeadzoneHalfwidth;  // pixels each side of center
  double intensity_max = kDefaultIntensityMax;

  /// Defaults with the deadzone shrunk so that 2 * halfwidth < width holds.
  static SensorConfig for_width(std::uint32_t width);

  /// Throws Error(InvalidArgument) when an invariant does not hold.
  void validate() const;

  bool operator==(const SensorConfig&) const = default;
};

struct PingRecord {
  double t = 0.0;    // seconds
  double lat = 0.0;  // degrees WGS84
  double lon = 0.0;  // degrees WGS84
  float depth = 0.0F;  // meters, positive down
  std::vector<float> scanline;

  bool operator==(const PingRecord&) const = default;
};

struct SurveyLog {
  SensorConfig config;
  std::vector<PingRecord> pings;

  bool operator==(const SurveyLog&) const = default;
};

/// Every field and every scanline sample compared by bit pattern.
bool bitwise_equal(const SurveyLog& a, const SurveyLog& b) noexcept;

/// Checks every PingRecord / SurveyLog invariant; throws the matching Error.
void validate(const SurveyLog& log);

// .bsl container: little-endian, 16-byte header ("BSL1", u32 width, u64 ping
// count) followed by fixed-stride pings (f64 t, f64 lat, f64 lon, f32 depth,
// width x f32 scanline).
inline constexpr std::size_t kBslHeaderSize = 16;
constexpr std::size_t bsl_ping_stride(std::uint32_t width) noexcept {
  return 8 + 8 + 8 + 4 + std::size_t{4} * width;
}

/// Width declared in a .bsl header. Throws BadMagic / TruncatedRecord.
std::uint32_t peek_bsl_width(std::span<const std::uint8_t> bytes);

/// Parses a .bsl stream. The sensor config defaults to
/// SensorConfig::for_width(header width); when one is supplied its width must
/// match the header. Bytes past the declared ping count are never read.
SurveyLog parse_log(std::span<const std::uint8_t> bytes,
                    const std::optional<SensorConfig>& config = std::nullopt);

/// Serializes a validated log. Invalid logs are rejected before any output.
std::vector<std::uint8_t> write_log(const SurveyLog& log);

/// CSV fallback: header `t,lat,lon,depth,i0,...,i{W-1}` then one row per ping.
SurveyLog parse_csv(std::string_view text, const SensorConfig& config);

/// Shortest round-trip decimal formatting, so parse_csv(write_csv(L)) == L.
std::string write_csv(const SurveyLog& log);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

/// Loads `.csv` (requires config) or anything else as .bsl.
SurveyLog load_log(const std::filesystem::path& path,
                   const std::optional<SensorConfig>& config = std::nullopt);

}  // namespace bathy
