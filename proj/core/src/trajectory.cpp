#include "bathy/trajectory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bathy/error.hpp"

namespace bathy {

std::vector<HeadingFrame> heading_frames(std::span<const PlanarPosition> positions) {
  if (positions.empty()) throw Error(Errc::EmptyInput, "heading needs at least one position");

  std::vector<HeadingFrame> frames(positions.size());
  std::optional<std::size_t> last_valid;
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) {
    HeadingFrame& f = frames[i];
    f.h = {positions[i + 1].x - positions[i].x, positions[i + 1].y - positions[i].y};
    if (f.h.x == 0.0 && f.h.y == 0.0) continue;
    const double norm = std::hypot(f.h.x, f.h.y);
    f.t_hat = {-f.h.y / norm, f.h.x / norm};
    f.valid = true;
    last_valid = i;
  }
  if (last_valid) frames.back() = frames[*last_valid];
  return frames;
}

namespace {

bool usable(const PingRecord& ping, const ReturnPair& returns) {
  return ping.depth > 0.0F && (returns.positive.found || returns.negative.found);
}

double mean_pixels(const ReturnPair& returns) {
  if (returns.positive.found && returns.negative.found) {
    return (static_cast<double>(returns.positive.pixels) + returns.negative.pixels) / 2.0;
  }
  return returns.positive.found ? returns.positive.pixels : returns.negative.pixels;
}

// Mean |d_i - d_j| over the `window` pings nearest to i in time. Pings are
// time-ordered, so the nearest ones are found by merging outward from i.
double flatness(const SurveyLog& log, std::size_t i, std::size_t window) {
  const auto& pings = log.pings;
  std::size_t lo = i;      // next candidate below is lo - 1
  std::size_t hi = i + 1;  // next candidate above is hi
  double sum = 0.0;
  std::size_t taken = 0;
  while (taken < window && (lo > 0 || hi < pings.size())) {
    bool take_low;
    if (lo == 0) {
      take_low = false;
    } else if (hi >= pings.size()) {
      take_low = true;
    } else {
      const double dl = pings[i].t - pings[lo - 1].t;
      const double dh = pings[hi].t - pings[i].t;
      take_low = dl <= dh;
    }
    const std::size_t j = take_low ? --lo : hi++;
    sum += std::abs(static_cast<double>(pings[i].depth) - static_cast<double>(pings[j].depth));
    ++taken;
  }
  return taken == 0 ? 0.0 : sum / static_cast<double>(taken);
}

}  // namespace

Calibration calibrate_ppd(const SurveyLog& log, std::span<const ReturnPair> overlay,
                          std::optional<std::size_t> ref_ping, std::size_t window) {
  if (overlay.size() != log.pings.size()) {
    throw Error(Errc::AlignmentMismatch, "overlay and log differ in ping count");
  }
  std::optional<std::size_t> chosen;
  if (ref_ping) {
    if (*ref_ping >= log.pings.size() || !usable(log.pings[*ref_ping], overlay[*ref_ping])) {
      throw Error(Errc::NoUsablePing, "reference ping " + std::to_string(*ref_ping) +
                                          " has no first return or no positive depth");
    }
    chosen = ref_ping;
  } else {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < log.pings.size(); ++i) {
      if (!usable(log.pings[i], overlay[i])) continue;
      const double score = flatness(log, i, window);
      if (!chosen || score < best) {
        best = score;
        chosen = i;
      }
    }
  }
  if (!chosen) throw Error(Errc::NoUsablePing, "no usable calibration ping");

  Calibration cal;
  cal.ref_ping = *chosen;
  cal.ref_depth = static_cast<double>(log.pings[*chosen].depth);
  cal.ref_pixels = mean_pixels(overlay[*chosen]);
  cal.ppd = cal.ref_pixels / cal.ref_depth;
  return cal;
}

}  // namespace bathy
