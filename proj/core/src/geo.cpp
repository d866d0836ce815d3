#include "bathy/geo.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bathy/error.hpp"

namespace bathy {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
}  // namespace

PlanarPosition mercator(double lat_deg, double lon_deg) {
  if (!(std::abs(lat_deg) < kMercatorLatLimit)) {
    throw Error(Errc::LatitudeOutOfRange, "latitude " + std::to_string(lat_deg) +
                                              " outside the Mercator band");
  }
  if (!(std::abs(lon_deg) <= 180.0)) {
    throw Error(Errc::LongitudeOutOfRange, "longitude " + std::to_string(lon_deg) +
                                               " outside [-180, 180]");
  }
  const double phi = lat_deg * kDegToRad;
  const double lambda = lon_deg * kDegToRad;
  return {kEarthRadius * lambda, kEarthRadius * std::asinh(std::tan(phi))};
}

GeoPoint inverse_mercator(PlanarPosition p) {
  const double lat = std::atan(std::sinh(p.y / kEarthRadius));
  return {lat * kRadToDeg, (p.x / kEarthRadius) * kRadToDeg};
}

}  // namespace bathy
