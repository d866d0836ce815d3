#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bathy/geo.hpp"
#include "bathy/scanline.hpp"
#include "bathy/sonar_log.hpp"

namespace bathy {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

/// Forward-difference heading of a ping and the unit vector perpendicular to
/// it along which the side-scan offsets are laid out.
struct HeadingFrame {
  Vec2 h;      // meters
  Vec2 t_hat;  // unit
  bool valid = false;

  bool operator==(const HeadingFrame&) const = default;
};

/// h_i = p_{i+1} - p_i, t_i = h_i x (0, 0, -1) = (-h_y, h_x). A zero
/// displacement yields an invalid frame. The last ping inherits the nearest
/// earlier valid frame. Throws EmptyInput for no positions.
std::vector<HeadingFrame> heading_frames(std::span<const PlanarPosition> positions);

inline constexpr std::size_t kFlatWindow = 5;

/// Pixels-per-meter ratio from one reference ping: ppd = ref_pixels / ref_depth.
struct Calibration {
  double ppd = 0.0;
  std::size_t ref_ping = 0;
  double ref_depth = 0.0;
  double ref_pixels = 0.0;  // mean of the found sides, so may be a half pixel

  bool operator==(const Calibration&) const = default;
};

/// Uses `ref_ping` when given, otherwise the usable ping whose depth differs
/// least (mean absolute difference) from its `window` nearest neighbours in
/// time, lowest index on ties. A ping is usable when it has at least one
/// first return and a positive depth. Throws NoUsablePing.
Calibration calibrate_ppd(const SurveyLog& log, std::span<const ReturnPair> overlay,
                          std::optional<std::size_t> ref_ping = std::nullopt,
                          std::size_t window = kFlatWindow);

}  // namespace bathy
