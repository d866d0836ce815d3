#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bathy/geo.hpp"
#include "bathy/scanline.hpp"
#include "bathy/sonar_log.hpp"
#include "bathy/trajectory.hpp"

namespace bathy {

enum class PointSource : std::uint8_t { Nadir = 0, PositiveSide = 1, NegativeSide = 2 };

struct CloudPoint {
  double x = 0.0;  // meters east
  double y = 0.0;  // meters north
  double z = 0.0;  // meters up, negative below the surface
  PointSource source = PointSource::Nadir;
  std::size_t ping = 0;

  bool operator==(const CloudPoint&) const = default;
};

/// Slant range and its vertical / horizontal components for a first return.
struct SideGeometry {
  double slant_range = 0.0;  // r1 = pixels / ppd
  double depth = 0.0;        // r1 cos(alpha2), positive down
  double offset = 0.0;       // r1 sin(alpha2), horizontal distance from the ping
};

SideGeometry side_geometry(std::uint32_t pixels, double ppd, double alpha2);

/// 0-2 side points for one ping: q = p +/- t_hat * offset with z = -depth.
/// Nothing is produced for an invalid frame or for a side without a return.
std::vector<CloudPoint> side_points(PlanarPosition enu, std::size_t ping, const HeadingFrame& frame,
                                    const ReturnPair& returns, const Calibration& cal,
                                    const SensorConfig& config);

/// One nadir point per ping followed by its side points, in ping order.
/// All spans must be aligned with log.pings (AlignmentMismatch otherwise).
std::vector<CloudPoint> assemble(const SurveyLog& log, std::span<const PlanarPosition> enu,
                                 std::span<const HeadingFrame> frames,
                                 std::span<const ReturnPair> overlay, const Calibration& cal,
                                 unsigned threads = 1);

inline constexpr double kDefaultOutlierRadiusPixels = 5.0;
inline constexpr std::size_t kDefaultMinNeighbors = 3;

struct OutlierParams {
  double radius = 0.0;  // meters
  std::size_t min_neighbors = kDefaultMinNeighbors;

  /// radius = 5 pixel-equivalents at the given calibration.
  static OutlierParams defaults_for(double ppd);
  void validate() const;
};

struct OutlierResult {
  std::vector<CloudPoint> kept;
  std::size_t removed = 0;
};

/// Keeps a point iff at least `min_neighbors` other points of the input lie
/// within `radius` (inclusive). Single pass against the original cloud,
/// backed by a uniform grid; input order is preserved.
OutlierResult remove_outliers(std::span<const CloudPoint> cloud, const OutlierParams& params,
                              unsigned threads = 1);

// Export codes: 0 nadir, 1 starboard, 2 port. Positive side maps to
// starboard unless `swap_sides` is set.
std::uint8_t export_code(PointSource source, bool swap_sides) noexcept;

/// `x y z` per line with six decimals, sorted by ping then source.
std::string export_xyz(std::span<const CloudPoint> cloud);

/// binary_little_endian 1.0 PLY: float x, y, z and uchar source per vertex.
std::vector<std::uint8_t> export_ply(std::span<const CloudPoint> cloud, bool swap_sides = false);

struct PlyVertex {
  float x = 0.0F;
  float y = 0.0F;
  float z = 0.0F;
  std::uint8_t source = 0;

  bool operator==(const PlyVertex&) const = default;
};

/// Reads back the layout written by export_ply. Throws MalformedPly.
std::vector<PlyVertex> parse_ply(std::span<const std::uint8_t> bytes);

}  // namespace bathy
