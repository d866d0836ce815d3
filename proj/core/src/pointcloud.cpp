#include "bathy/pointcloud.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <string_view>
#include <tuple>

#include "bathy/error.hpp"
#include "bathy/parallel.hpp"

namespace bathy {

SideGeometry side_geometry(std::uint32_t pixels, double ppd, double alpha2) {
  SideGeometry g;
  g.slant_range = static_cast<double>(pixels) / ppd;
  g.depth = g.slant_range * std::cos(alpha2);
  g.offset = g.slant_range * std::sin(alpha2);
  return g;
}

std::vector<CloudPoint> side_points(PlanarPosition enu, std::size_t ping, const HeadingFrame& frame,
                                    const ReturnPair& returns, const Calibration& cal,
                                    const SensorConfig& config) {
  if (!(cal.ppd > 0.0)) throw Error(Errc::InvalidArgument, "calibration ppd must be positive");
  std::vector<CloudPoint> points;
  if (!frame.valid) return points;
  for (const FirstReturn* fr : {&returns.positive, &returns.negative}) {
    if (!fr->found) continue;
    const SideGeometry g = side_geometry(fr->pixels, cal.ppd, config.alpha2);
    const double sign = fr->side == Side::Positive ? 1.0 : -1.0;
    CloudPoint p;
    p.x = enu.x + sign * frame.t_hat.x * g.offset;
    p.y = enu.y + sign * frame.t_hat.y * g.offset;
    p.z = 0.0 - g.depth;
    p.source = fr->side == Side::Positive ? PointSource::PositiveSide : PointSource::NegativeSide;
    p.ping = ping;
    points.push_back(p);
  }
  return points;
}

std::vector<CloudPoint> assemble(const SurveyLog& log, std::span<const PlanarPosition> enu,
                                 std::span<const HeadingFrame> frames,
                                 std::span<const ReturnPair> overlay, const Calibration& cal,
                                 unsigned threads) {
  const std::size_t n = log.pings.size();
  if (enu.size() != n || frames.size() != n || overlay.size() != n) {
    throw Error(Errc::AlignmentMismatch, "positions, frames and overlay must match the ping count");
  }
  if (!(cal.ppd > 0.0)) throw Error(Errc::InvalidArgument, "calibration ppd must be positive");

  // Three slots per ping, compacted afterwards so the order never depends on
  // how the work was split.
  std::vector<CloudPoint> slots(3 * n);
  std::vector<std::uint8_t> used(3 * n, 0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CloudPoint nadir;
      nadir.x = enu[i].x;
      nadir.y = enu[i].y;
      nadir.z = 0.0 - static_cast<double>(log.pings[i].depth);
      nadir.source = PointSource::Nadir;
      nadir.ping = i;
      slots[3 * i] = nadir;
      used[3 * i] = 1;
      for (const CloudPoint& p : side_points(enu[i], i, frames[i], overlay[i], cal, log.config)) {
        const std::size_t slot = 3 * i + static_cast<std::size_t>(p.source);
        slots[slot] = p;
        used[slot] = 1;
      }
    }
  });

  std::vector<CloudPoint> cloud;
  cloud.reserve(3 * n);
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (used[k]) cloud.push_back(slots[k]);
  }
  return cloud;
}

OutlierParams OutlierParams::defaults_for(double ppd) {
  return {kDefaultOutlierRadiusPixels / ppd, kDefaultMinNeighbors};
}

void OutlierParams::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(Errc::InvalidArgument, "outlier radius must be positive and finite");
  }
  if (min_neighbors < 1) throw Error(Errc::InvalidArgument, "min_neighbors must be at least 1");
}

namespace {

using CellKey = std::array<std::int64_t, 3>;

// Cell edge is the radius padded by a relative 1e-9 so that rounding in
// coordinate / edge can never place two points within `radius` more than one
// cell apart (valid while |coordinate| / radius stays below ~1e6).
class UniformGrid {
 public:
  UniformGrid(std::span<const CloudPoint> cloud, double radius)
      : cloud_(cloud), inv_edge_(1.0 / (radius * (1.0 + 1e-9))) {
    entries_.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) entries_.push_back({key_of(cloud[i]), i});
    std::sort(entries_.begin(), entries_.end());
  }

  CellKey key_of(const CloudPoint& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x * inv_edge_)),
            static_cast<std::int64_t>(std::floor(p.y * inv_edge_)),
            static_cast<std::int64_t>(std::floor(p.z * inv_edge_))};
  }

  /// Other points within sqrt(r2) of point `index`, counting stops at `cap`.
  std::size_t count_neighbors(std::size_t index, double r2, std::size_t cap) const {
    const CloudPoint& p = cloud_[index];
    const CellKey c = key_of(p);
    std::size_t count = 0;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const Entry lo{{c[0] + dx, c[1] + dy, c[2] - 1}, 0};
        auto it = std::lower_bound(entries_.begin(), entries_.end(), lo);
        for (; it != entries_.end(); ++it) {
          const CellKey& k = it->key;
          if (k[0] != c[0] + dx || k[1] != c[1] + dy || k[2] > c[2] + 1) break;
          if (it->index == index) continue;
          const CloudPoint& q = cloud_[it->index];
          const double ex = p.x - q.x;
          const double ey = p.y - q.y;
          const double ez = p.z - q.z;
          if (ex * ex + ey * ey + ez * ez <= r2 && ++count >= cap) return count;
        }
      }
    }
    return count;
  }

 private:
  struct Entry {
    CellKey key;
    std::size_t index;
    bool operator<(const Entry& o) const { return std::tie(key, index) < std::tie(o.key, o.index); }
  };

  std::span<const CloudPoint> cloud_;
  double inv_edge_;
  std::vector<Entry> entries_;
};

void put_f32(std::vector<std::uint8_t>& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

float get_f32(const std::uint8_t* p) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= std::uint32_t{p[i]} << (8 * i);
  return std::bit_cast<float>(bits);
}

std::vector<CloudPoint> canonical_order(std::span<const CloudPoint> cloud) {
  std::vector<CloudPoint> sorted(cloud.begin(), cloud.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const CloudPoint& a, const CloudPoint& b) {
    return std::tie(a.ping, a.source) < std::tie(b.ping, b.source);
  });
  return sorted;
}

}  // namespace

OutlierResult remove_outliers(std::span<const CloudPoint> cloud, const OutlierParams& params,
                              unsigned threads) {
  params.validate();
  OutlierResult result;
  if (cloud.empty()) return result;

  const UniformGrid grid(cloud, params.radius);
  const double r2 = params.radius * params.radius;
  std::vector<std::uint8_t> keep(cloud.size(), 0);
  parallel_for(cloud.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      keep[i] = grid.count_neighbors(i, r2, params.min_neighbors) >= params.min_neighbors;
    }
  });

  result.kept.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (keep[i]) result.kept.push_back(cloud[i]);
  }
  result.removed = cloud.size() - result.kept.size();
  return result;
}

std::uint8_t export_code(PointSource source, bool swap_sides) noexcept {
  switch (source) {
    case PointSource::Nadir: return 0;
    case PointSource::PositiveSide: return swap_sides ? 2 : 1;
    case PointSource::NegativeSide: return swap_sides ? 1 : 2;
  }
  return 0;
}

std::string export_xyz(std::span<const CloudPoint> cloud) {
  std::string out;
  out.reserve(cloud.size() * 40);
  char buf[128];
  for (const CloudPoint& p : canonical_order(cloud)) {
    char* cursor = buf;
    for (double v : {p.x, p.y, p.z}) {
      if (cursor != buf) *cursor++ = ' ';
      cursor = std::to_chars(cursor, buf + sizeof(buf), v, std::chars_format::fixed, 6).ptr;
    }
    *cursor++ = '\n';
    out.append(buf, cursor);
  }
  return out;
}

namespace {
constexpr std::string_view kPlyHeaderStart =
    "ply\n"
    "format binary_little_endian 1.0\n"
    "comment source 0=nadir 1=starboard 2=port\n"
    "element vertex ";
constexpr std::string_view kPlyHeaderEnd =
    "\n"
    "property float x\n"
    "property float y\n"
    "property float z\n"
    "property uchar source\n"
    "end_header\n";
constexpr std::size_t kPlyVertexSize = 13;
}  // namespace

std::vector<std::uint8_t> export_ply(std::span<const CloudPoint> cloud, bool swap_sides) {
  std::string header(kPlyHeaderStart);
  header += std::to_string(cloud.size());
  header += kPlyHeaderEnd;
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + cloud.size() * kPlyVertexSize);
  for (const CloudPoint& p : canonical_order(cloud)) {
    put_f32(out, static_cast<float>(p.x));
    put_f32(out, static_cast<float>(p.y));
    put_f32(out, static_cast<float>(p.z));
    out.push_back(export_code(p.source, swap_sides));
  }
  return out;
}

std::vector<PlyVertex> parse_ply(std::span<const std::uint8_t> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  constexpr std::string_view kEnd = "end_header\n";
  const std::size_t end = text.find(kEnd);
  if (!text.starts_with("ply\n") || end == std::string_view::npos) {
    throw Error(Errc::MalformedPly, "missing ply signature or end_header");
  }
  const std::string_view header = text.substr(0, end);
  if (header.find("format binary_little_endian 1.0\n") == std::string_view::npos) {
    throw Error(Errc::MalformedPly, "only binary_little_endian 1.0 is supported");
  }
  constexpr std::string_view kVertex = "element vertex ";
  const std::size_t at = header.find(kVertex);
  if (at == std::string_view::npos) throw Error(Errc::MalformedPly, "no vertex element");
  std::size_t count = 0;
  const char* first = header.data() + at + kVertex.size();
  const auto [ptr, ec] = std::from_chars(first, header.data() + header.size(), count);
  if (ec != std::errc() || ptr == first) throw Error(Errc::MalformedPly, "bad vertex count");
  const std::size_t props = header.find("property");
  if (props == std::string_view::npos ||
      header.substr(props) !=
      "property float x\nproperty float y\nproperty float z\nproperty uchar source\n") {
    throw Error(Errc::MalformedPly, "unexpected vertex properties");
  }

  const std::size_t body = end + kEnd.size();
  if ((bytes.size() - body) / kPlyVertexSize < count) {
    throw Error(Errc::MalformedPly, "vertex data truncated");
  }
  std::vector<PlyVertex> vertices(count);
  const std::uint8_t* cursor = bytes.data() + body;
  for (PlyVertex& v : vertices) {
    v.x = get_f32(cursor);
    v.y = get_f32(cursor + 4);
    v.z = get_f32(cursor + 8);
    v.source = cursor[12];
    cursor += kPlyVertexSize;
  }
  return vertices;
}

}  // namespace bathy
