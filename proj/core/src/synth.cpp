#include "bathy/synth.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bathy/error.hpp"

namespace bathy {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> parse_numbers(std::string_view text, char sep, std::string_view what) {
  std::vector<double> values;
  while (true) {
    const std::size_t at = text.find(sep);
    const std::string_view field = text.substr(0, at);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw Error(Errc::InvalidArgument, "bad number '" + std::string(field) + "' in " +
                                             std::string(what));
    }
    values.push_back(v);
    if (at == std::string_view::npos) break;
    text.remove_prefix(at + 1);
  }
  return values;
}

// splitmix64 finalizer; decorrelates per-ping seeds derived as seed ^ index.
std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void speckle_with(std::span<float> samples, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  for (float& s : samples) {
    if (s == 0.0F) continue;
    const double factor = std::max(0.0, 1.0 + sigma * unit(rng));
    s = static_cast<float>(static_cast<double>(s) * factor);
  }
}

std::uint32_t side_extent(const SensorConfig& config, std::size_t side) {
  const std::uint32_t center = config.scanline_width / 2;
  return side == 0 ? config.scanline_width - 1 - center : center;
}

}  // namespace

double DepthField::operator()(double x, double y) const {
  return std::visit(
      Overloaded{
          [](const ConstantField& f) { return f.depth; },
          [x, y](const SlopeField& f) {
            return f.depth_at_origin +
                   f.gradient * (x * std::cos(f.direction) + y * std::sin(f.direction));
          },
          [x, y](const BowlField& f) {
            const double dx = x - f.cx;
            const double dy = y - f.cy;
            const double u = (dx * dx + dy * dy) / (f.radius * f.radius);
            return f.rim_depth + (f.center_depth - f.rim_depth) * std::max(0.0, 1.0 - u);
          },
      },
      shape_);
}

DepthField DepthField::parse(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(Errc::InvalidArgument, "field spec needs KIND:PARAMS, got '" + std::string(spec) + "'");
  }
  const std::string_view kind = spec.substr(0, colon);
  const auto v = parse_numbers(spec.substr(colon + 1), ',', "field spec");
  if (kind == "const" && v.size() == 1) return ConstantField{v[0]};
  if (kind == "slope" && (v.size() == 2 || v.size() == 3)) {
    return SlopeField{v[0], v[1], v.size() == 3 ? v[2] * std::numbers::pi / 180.0 : 0.0};
  }
  if (kind == "bowl" && v.size() == 5 && v[4] > 0.0) return BowlField{v[0], v[1], v[2], v[3], v[4]};
  throw Error(Errc::InvalidArgument, "unknown field spec '" + std::string(spec) + "'");
}

SyntheticSurvey generate_log(const DepthField& field, std::span<const PlanarPosition> path,
                             const SynthOptions& options) {
  if (path.size() < 2) throw Error(Errc::DegeneratePath, "path needs at least two points");
  if (!(options.ppd > 0.0)) throw Error(Errc::InvalidArgument, "ppd must be positive");
  if (options.speckle.sigma < 0.0) throw Error(Errc::InvalidArgument, "speckle sigma must be >= 0");
  if (!(options.stray_fraction >= 0.0 && options.stray_fraction <= 1.0)) {
    throw Error(Errc::InvalidArgument, "stray fraction must lie in [0, 1]");
  }
  const SensorConfig& config = options.config;
  config.validate();

  // Forward-difference heading normals; stationary points borrow the nearest
  // earlier moving segment, or the next one at the start of the path.
  const std::size_t n = path.size();
  std::vector<std::optional<Vec2>> normal(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double hx = path[i + 1].x - path[i].x;
    const double hy = path[i + 1].y - path[i].y;
    if (hx == 0.0 && hy == 0.0) continue;
    const double len = std::sqrt(hx * hx + hy * hy);
    normal[i] = Vec2{-hy / len, hx / len};
  }
  std::optional<Vec2> carry;
  for (std::size_t i = 0; i < n; ++i) {
    if (normal[i]) carry = normal[i];
    else normal[i] = carry;
  }
  carry.reset();
  for (std::size_t i = n; i-- > 0;) {
    if (normal[i]) carry = normal[i];
    else normal[i] = carry;
  }
  if (!normal[0]) throw Error(Errc::DegeneratePath, "all path points are identical");

  const PlanarPosition origin = mercator(options.origin.lat, options.origin.lon);
  const double tan_a = std::tan(config.alpha2);
  const double cos_a = std::cos(config.alpha2);
  const std::uint32_t center = config.scanline_width / 2;
  const auto raw_peak = static_cast<float>(config.intensity_max);

  SyntheticSurvey survey;
  survey.log.config = config;
  survey.log.pings.resize(n);
  survey.truth.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    PlantedPing& truth = survey.truth[i];
    truth.position = path[i];
    truth.t_hat = *normal[i];
    truth.nadir_depth = field(path[i].x, path[i].y);
    if (!(truth.nadir_depth >= 0.0)) {
      throw Error(Errc::InvalidArgument, "depth field is negative at path point " + std::to_string(i));
    }

    std::mt19937_64 rng(mix_seed(options.speckle.seed ^ static_cast<std::uint64_t>(i)));
    std::bernoulli_distribution stray_draw(options.stray_fraction);

    PingRecord& ping = survey.log.pings[i];
    ping.t = static_cast<double>(i) * options.dt;
    const GeoPoint gps = inverse_mercator(origin + path[i]);
    ping.lat = gps.lat;
    ping.lon = gps.lon;
    ping.depth = static_cast<float>(truth.nadir_depth);
    ping.scanline.assign(config.scanline_width, 0.0F);

    for (std::size_t s = 0; s < 2; ++s) {
      PlantedSide& side = truth.sides[s];
      const double sign = s == 0 ? 1.0 : -1.0;
      double depth = truth.nadir_depth;
      PlanarPosition at = path[i];
      for (int iter = 0; iter < 2; ++iter) {
        const double offset = depth * tan_a;
        at = {path[i].x + sign * truth.t_hat.x * offset, path[i].y + sign * truth.t_hat.y * offset};
        depth = field(at.x, at.y);
      }
      if (!(depth >= 0.0)) {
        throw Error(Errc::InvalidArgument, "depth field is negative beside path point " + std::to_string(i));
      }
      side.depth = depth;
      side.position = at;

      const double pixel = std::round(options.ppd * depth / cos_a);
      const std::uint32_t extent = side_extent(config, s);
      auto sample = [&](std::uint32_t offset) -> float& {
        return ping.scanline[s == 0 ? center + offset : center - offset];
      };
      if (pixel > config.deadzone_halfwidth && pixel <= extent) {
        const auto p = static_cast<std::uint32_t>(pixel);
        side.pixel = p;
        for (std::uint32_t k = p; k < p + kPulseWidth && k <= extent; ++k) sample(k) = raw_peak;
        if (stray_draw(rng) && p >= config.deadzone_halfwidth + 1 + kStrayGap) {
          std::uniform_int_distribution<std::uint32_t> where(config.deadzone_halfwidth + 1, p - kStrayGap);
          side.stray_pixel = where(rng);
          sample(*side.stray_pixel) = raw_peak;
        }
      }
    }
    speckle_with(ping.scanline, options.speckle.sigma, rng);
  }
  return survey;
}

void apply_speckle(std::span<float> samples, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw Error(Errc::InvalidArgument, "speckle sigma must be >= 0");
  std::mt19937_64 rng(mix_seed(seed));
  speckle_with(samples, sigma, rng);
}

std::uint8_t grayscale(Rgb pixel) {
  for (int c : {pixel.r, pixel.g, pixel.b}) {
    if (c < 0 || c > 255) {
      throw Error(Errc::ChannelOutOfRange, "channel value " + std::to_string(c) + " outside [0, 255]");
    }
  }
  // Integer weights in thousandths keep the half-up rounding exact.
  return static_cast<std::uint8_t>((299 * pixel.r + 587 * pixel.g + 114 * pixel.b + 500) / 1000);
}

std::vector<std::uint8_t> grayscale(std::span<const Rgb> pixels) {
  std::vector<std::uint8_t> out;
  out.reserve(pixels.size());
  for (const Rgb& p : pixels) out.push_back(grayscale(p));
  return out;
}

std::vector<float> gray_to_raw(std::span<const std::uint8_t> gray, double intensity_max) {
  std::vector<float> raw;
  raw.reserve(gray.size());
  for (std::uint8_t g : gray) raw.push_back(static_cast<float>(g / 255.0 * intensity_max));
  return raw;
}

std::vector<PlanarPosition> straight_path(PlanarPosition start, double heading_rad,
                                          double spacing, std::size_t count) {
  std::vector<PlanarPosition> path(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = spacing * static_cast<double>(i);
    path[i] = {start.x + d * std::cos(heading_rad), start.y + d * std::sin(heading_rad)};
  }
  return path;
}

std::vector<PlanarPosition> lawnmower_path(PlanarPosition start, double lane_length,
                                           double lane_spacing, std::size_t lanes, double spacing) {
  if (!(spacing > 0.0) || !(lane_length > 0.0)) {
    throw Error(Errc::InvalidArgument, "lawnmower lengths must be positive");
  }
  std::vector<PlanarPosition> path;
  const auto per_lane = static_cast<std::size_t>(std::floor(lane_length / spacing)) + 1;
  const auto per_turn = static_cast<std::size_t>(std::floor(lane_spacing / spacing));
  for (std::size_t lane = 0; lane < lanes; ++lane) {
    const double y = start.y + lane_spacing * static_cast<double>(lane);
    const bool eastward = lane % 2 == 0;
    for (std::size_t k = 0; k < per_lane; ++k) {
      const double along = spacing * static_cast<double>(k);
      path.push_back({start.x + (eastward ? along : lane_length - along), y});
    }
    if (lane + 1 == lanes) break;
    const double x_turn = eastward ? start.x + lane_length : start.x;
    for (std::size_t k = 1; k < per_turn; ++k) path.push_back({x_turn, y + spacing * static_cast<double>(k)});
  }
  return path;
}

std::vector<PlanarPosition> jitter_path(std::span<const PlanarPosition> path, double sigma,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed));
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<PlanarPosition> out(path.begin(), path.end());
  if (sigma <= 0.0) return out;
  for (PlanarPosition& p : out) {
    p.x += noise(rng);
    p.y += noise(rng);
  }
  return out;
}

std::vector<PlanarPosition> parse_path(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(Errc::InvalidArgument, "path spec needs KIND:PARAMS, got '" + std::string(spec) + "'");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (kind == "points") {
    std::vector<PlanarPosition> path;
    std::string_view rest = body;
    while (true) {
      const std::size_t semi = rest.find(';');
      const auto xy = parse_numbers(rest.substr(0, semi), ',', "path point");
      if (xy.size() != 2) throw Error(Errc::InvalidArgument, "path points need X,Y");
      path.push_back({xy[0], xy[1]});
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
    return path;
  }
  const auto v = parse_numbers(body, ',', "path spec");
  if (kind == "line" && v.size() == 5 && v[4] >= 1.0) {
    const auto count = static_cast<std::size_t>(v[4]);
    std::vector<PlanarPosition> path(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      path[i] = {v[0] + f * (v[2] - v[0]), v[1] + f * (v[3] - v[1])};
    }
    return path;
  }
  if (kind == "lawnmower" && v.size() == 4 && v[2] >= 1.0) {
    return lawnmower_path({0.0, 0.0}, v[0], v[1], static_cast<std::size_t>(v[2]), v[3]);
  }
  throw Error(Errc::InvalidArgument, "unknown path spec '" + std::string(spec) + "'");
}

BenchmarkSpec noisy_benchmark() {
  BenchmarkSpec spec;
  spec.field = BowlField{30.0, 6.0, 6.0, 2.5, 45.0};
  const auto lanes = lawnmower_path({0.0, 0.0}, 60.0, 3.0, 5, 0.05);
  spec.path = jitter_path(lanes, 0.006, 2023);
  spec.options.ppd = 25.0;
  spec.options.speckle = {0.2, 7};
  spec.options.stray_fraction = 0.07;
  return spec;
}

}  // namespace bathy
