#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bathy/geo.hpp"
#include "bathy/pointcloud.hpp"
#include "bathy/scanline.hpp"
#include "bathy/sonar_log.hpp"
#include "bathy/trajectory.hpp"

namespace bathy {

/// Every knob of the survey-to-cloud run. Unset optionals fall back to the
/// module defaults (first-ping ENU origin, auto-selected calibration ping,
/// radius of five pixel-equivalents).
struct PipelineConfig {
  double threshold = kDefaultThreshold;
  std::optional<GeoPoint> enu_origin;
  std::optional<std::size_t> ref_ping;
  /// Bypasses calibration with a known pixels-per-meter ratio.
  std::optional<double> ppd;
  std::optional<double> outlier_radius;
  std::size_t min_neighbors = kDefaultMinNeighbors;
  bool swap_sides = false;
  unsigned threads = 1;

  /// Throws Error(InvalidArgument) when a field violates its module invariant.
  void validate() const;
};

struct PipelineResult {
  std::vector<PlanarPosition> enu;
  std::vector<HeadingFrame> frames;
  std::vector<ReturnPair> overlay;
  Calibration calibration;
  bool calibration_overridden = false;
  OutlierParams outlier;
  std::vector<CloudPoint> raw_cloud;  // before outlier removal
  std::vector<CloudPoint> cloud;      // after outlier removal
  std::size_t removed = 0;
};

/// Projects positions into the ENU frame (first ping unless overridden).
std::vector<PlanarPosition> enu_positions(const SurveyLog& log,
                                          const std::optional<GeoPoint>& origin = std::nullopt);

/// First returns, headings, calibration, assembly and outlier removal.
/// Throws NoUsablePing when no calibration ping exists.
PipelineResult run_pipeline(const SurveyLog& log, const PipelineConfig& config);

/// Plain `key=value` run summary.
std::string format_summary(const SurveyLog& log, const PipelineConfig& config,
                           const PipelineResult& result);

}  // namespace bathy
