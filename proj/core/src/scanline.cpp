#include "bathy/scanline.hpp"

#include <string>

#include "bathy/error.hpp"
#include "bathy/parallel.hpp"

namespace bathy {

NormalizedScanline normalize(std::span<const float> raw, const SensorConfig& config) {
  if (raw.size() != config.scanline_width) {
    throw Error(Errc::WidthMismatch, "scanline has " + std::to_string(raw.size()) +
                                         " samples, expected " +
                                         std::to_string(config.scanline_width));
  }
  NormalizedScanline line;
  line.center = config.scanline_width / 2;
  line.deadzone_halfwidth = config.deadzone_halfwidth;
  line.values.resize(raw.size());

  const std::uint32_t dz_lo = line.center >= line.deadzone_halfwidth ? line.center - line.deadzone_halfwidth : 0;
  const std::uint32_t dz_hi = line.center + line.deadzone_halfwidth;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (i >= dz_lo && i <= dz_hi) {
      line.values[i] = 0.0F;
      continue;
    }
    const double scaled = static_cast<double>(raw[i]) / config.intensity_max;
    // NaN falls through to 0 as well.
    line.values[i] = scaled > 0.0 ? static_cast<float>(scaled < 1.0 ? scaled : 1.0) : 0.0F;
  }
  return line;
}

FirstReturn first_return(const NormalizedScanline& line, double threshold, Side side) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(Errc::InvalidArgument, "threshold must lie in (0, 1)");
  }
  FirstReturn result{side};
  const auto width = static_cast<std::uint32_t>(line.values.size());
  const std::uint32_t start = line.deadzone_halfwidth + 1;
  if (side == Side::Positive) {
    for (std::uint32_t p = start; line.center + p < width; ++p) {
      if (line.values[line.center + p] >= threshold) {
        result.pixels = p;
        result.found = true;
        break;
      }
    }
  } else {
    for (std::uint32_t p = start; p <= line.center; ++p) {
      if (line.values[line.center - p] >= threshold) {
        result.pixels = p;
        result.found = true;
        break;
      }
    }
  }
  return result;
}

ReturnPair first_returns(const NormalizedScanline& line, double threshold) {
  return {first_return(line, threshold, Side::Positive),
          first_return(line, threshold, Side::Negative)};
}

std::vector<ReturnPair> first_return_overlay(const SurveyLog& log, double threshold,
                                             unsigned threads) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(Errc::InvalidArgument, "threshold must lie in (0, 1)");
  }
  std::vector<ReturnPair> overlay(log.pings.size());
  parallel_for(log.pings.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      overlay[i] = first_returns(normalize(log.pings[i].scanline, log.config), threshold);
    }
  });
  return overlay;
}

}  // namespace bathy
