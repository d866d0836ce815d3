#pragma once

namespace bathy {

/// Spherical earth radius used by the pseudo-Mercator projection (EPSG:3857).
inline constexpr double kEarthRadius = 6378137.0;
/// Projection is rejected at or beyond this latitude.
inline constexpr double kMercatorLatLimit = 85.06;

struct PlanarPosition {
  double x = 0.0;  // meters east
  double y = 0.0;  // meters north

  bool operator==(const PlanarPosition&) const = default;
};

inline PlanarPosition operator+(PlanarPosition a, PlanarPosition b) { return {a.x + b.x, a.y + b.y}; }
inline PlanarPosition operator-(PlanarPosition a, PlanarPosition b) { return {a.x - b.x, a.y - b.y}; }

/// Local East-North frame: planar Mercator coordinates shifted to `origin`.
struct EnuFrame {
  PlanarPosition origin;
};

struct GeoPoint {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

/// x = R * lon, y = R * ln(tan(pi/4 + lat/2)), angles in radians.
PlanarPosition mercator(double lat_deg, double lon_deg);

GeoPoint inverse_mercator(PlanarPosition p);

inline PlanarPosition to_enu(PlanarPosition p, const EnuFrame& frame) { return p - frame.origin; }
inline PlanarPosition from_enu(PlanarPosition p, const EnuFrame& frame) { return p + frame.origin; }

}  // namespace bathy
