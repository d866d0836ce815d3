#include "bathy/pipeline.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>

#include "bathy/error.hpp"

namespace bathy {

void PipelineConfig::validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(Errc::InvalidArgument, "threshold must lie in (0, 1)");
  }
  if (ppd && !(*ppd > 0.0 && std::isfinite(*ppd))) {
    throw Error(Errc::InvalidArgument, "ppd override must be positive");
  }
  if (outlier_radius && !(*outlier_radius > 0.0 && std::isfinite(*outlier_radius))) {
    throw Error(Errc::InvalidArgument, "outlier radius must be positive");
  }
  if (min_neighbors < 1) throw Error(Errc::InvalidArgument, "min_neighbors must be at least 1");
  if (threads < 1) throw Error(Errc::InvalidArgument, "threads must be at least 1");
  if (enu_origin) (void)mercator(enu_origin->lat, enu_origin->lon);
}

std::vector<PlanarPosition> enu_positions(const SurveyLog& log, const std::optional<GeoPoint>& origin) {
  std::vector<PlanarPosition> merc;
  merc.reserve(log.pings.size());
  for (const PingRecord& ping : log.pings) merc.push_back(mercator(ping.lat, ping.lon));
  EnuFrame frame;
  if (origin) {
    frame.origin = mercator(origin->lat, origin->lon);
  } else if (!merc.empty()) {
    frame.origin = merc.front();
  }
  for (PlanarPosition& p : merc) p = to_enu(p, frame);
  return merc;
}

PipelineResult run_pipeline(const SurveyLog& log, const PipelineConfig& config) {
  config.validate();
  log.config.validate();

  PipelineResult r;
  r.overlay = first_return_overlay(log, config.threshold, config.threads);
  if (config.ppd) {
    r.calibration.ppd = *config.ppd;
    r.calibration_overridden = true;
  } else {
    r.calibration = calibrate_ppd(log, r.overlay, config.ref_ping);
  }
  if (log.pings.empty()) return r;

  r.enu = enu_positions(log, config.enu_origin);
  r.frames = heading_frames(r.enu);
  r.raw_cloud = assemble(log, r.enu, r.frames, r.overlay, r.calibration, config.threads);

  r.outlier = OutlierParams::defaults_for(r.calibration.ppd);
  if (config.outlier_radius) r.outlier.radius = *config.outlier_radius;
  r.outlier.min_neighbors = config.min_neighbors;
  auto filtered = remove_outliers(r.raw_cloud, r.outlier, config.threads);
  r.cloud = std::move(filtered.kept);
  r.removed = filtered.removed;
  return r;
}

namespace {
std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}
}  // namespace

std::string format_summary(const SurveyLog& log, const PipelineConfig& config,
                           const PipelineResult& r) {
  std::size_t counts[3] = {0, 0, 0};
  for (const CloudPoint& p : r.cloud) counts[export_code(p.source, config.swap_sides)]++;
  const double before = static_cast<double>(r.raw_cloud.size());
  const double percent = r.raw_cloud.empty() ? 0.0 : 100.0 * static_cast<double>(r.removed) / before;
  char pct[32];
  std::snprintf(pct, sizeof(pct), "%.2f", percent);

  std::string out;
  out += "pings=" + std::to_string(log.pings.size()) + "\n";
  out += "scanline_width=" + std::to_string(log.config.scanline_width) + "\n";
  out += "threshold=" + num(config.threshold) + "\n";
  out += "ppd=" + num(r.calibration.ppd) + "\n";
  if (r.calibration_overridden) {
    out += "ref_ping=override\n";
  } else {
    out += "ref_ping=" + std::to_string(r.calibration.ref_ping) + "\n";
    out += "ref_depth=" + num(r.calibration.ref_depth) + "\n";
    out += "ref_pixels=" + num(r.calibration.ref_pixels) + "\n";
  }
  out += "outlier_radius=" + num(r.outlier.radius) + "\n";
  out += "outlier_min_neighbors=" + std::to_string(r.outlier.min_neighbors) + "\n";
  out += "points_before=" + std::to_string(r.raw_cloud.size()) + "\n";
  out += "points_after=" + std::to_string(r.cloud.size()) + "\n";
  out += "points_removed=" + std::to_string(r.removed) + "\n";
  out += "removal_percent=" + std::string(pct) + "\n";
  out += "nadir_points=" + std::to_string(counts[0]) + "\n";
  out += "starboard_points=" + std::to_string(counts[1]) + "\n";
  out += "port_points=" + std::to_string(counts[2]) + "\n";
  return out;
}

}  // namespace bathy
