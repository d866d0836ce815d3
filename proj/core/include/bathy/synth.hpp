#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bathy/geo.hpp"
#include "bathy/sonar_log.hpp"
#include "bathy/trajectory.hpp"

namespace bathy {

// Built-in ground-truth depth fields (meters, positive down).
struct ConstantField {
  double depth = 4.0;
};

/// depth = depth_at_origin + gradient * (x cos(direction) + y sin(direction))
struct SlopeField {
  double depth_at_origin = 4.0;
  double gradient = 0.02;
  double direction = 0.0;  // radians from east
};

/// Paraboloid from center_depth at (cx, cy) up to rim_depth at `radius`,
/// flat at rim_depth beyond it.
struct BowlField {
  double cx = 0.0;
  double cy = 0.0;
  double center_depth = 6.0;
  double rim_depth = 2.0;
  double radius = 100.0;
};

class DepthField {
 public:
  using Shape = std::variant<ConstantField, SlopeField, BowlField>;

  DepthField() = default;
  DepthField(Shape shape) : shape_(shape) {}  // NOLINT(google-explicit-constructor)
  DepthField(ConstantField f) : shape_(f) {}  // NOLINT(google-explicit-constructor)
  DepthField(SlopeField f) : shape_(f) {}     // NOLINT(google-explicit-constructor)
  DepthField(BowlField f) : shape_(f) {}      // NOLINT(google-explicit-constructor)

  double operator()(double x, double y) const;
  const Shape& shape() const { return shape_; }

  /// `const:D`, `slope:D,G[,DIR_DEG]` or `bowl:CX,CY,CENTER,RIM,RADIUS`.
  static DepthField parse(std::string_view spec);

 private:
  Shape shape_{ConstantField{}};
};

struct SpeckleParams {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint32_t kPulseWidth = 5;
inline constexpr std::uint32_t kStrayGap = 6;

struct SynthOptions {
  double ppd = 25.0;
  SensorConfig config;
  SpeckleParams speckle;
  /// Probability that a side return is preceded by a single spurious echo
  /// at a random pixel between the deadzone and the true pulse.
  double stray_fraction = 0.0;
  GeoPoint origin{29.4, -82.1};  // path coordinates are meters east/north of this
  double dt = 0.1;               // seconds between pings
};

/// Ground truth for one side of one ping.
struct PlantedSide {
  std::optional<std::uint32_t> pixel;  // pulse start, absent when off the scanline
  std::optional<std::uint32_t> stray_pixel;
  double depth = 0.0;                  // true depth at the side point
  PlanarPosition position;             // true side point, meters
};

struct PlantedPing {
  PlanarPosition position;
  double nadir_depth = 0.0;
  Vec2 t_hat;  // generator heading normal, unit
  std::array<PlantedSide, 2> sides;  // [0] positive, [1] negative
};

struct SyntheticSurvey {
  SurveyLog log;
  std::vector<PlantedPing> truth;
};

/// Renders a survey over `path` (meters relative to options.origin). Per
/// ping: nadir depth from the field, side depths by two fixed-point steps on
/// offset = depth * tan(alpha2), pulse start p = round(ppd * depth / cos(alpha2)),
/// then multiplicative speckle. Throws DegeneratePath for fewer than two
/// points or a path with no movement.
SyntheticSurvey generate_log(const DepthField& field, std::span<const PlanarPosition> path,
                             const SynthOptions& options);

/// Multiplies each nonzero sample by max(0, 1 + sigma * g), g ~ N(0, 1).
void apply_speckle(std::span<float> samples, double sigma, std::uint64_t seed);

struct Rgb {
  int r = 0;
  int g = 0;
  int b = 0;
};

/// Rec. 601 luma 0.299 R + 0.587 G + 0.114 B rounded half-up. Channels must
/// lie in [0, 255] (ChannelOutOfRange).
std::uint8_t grayscale(Rgb pixel);
std::vector<std::uint8_t> grayscale(std::span<const Rgb> pixels);

/// Maps 8-bit gray levels onto raw sensor units (255 -> intensity_max).
std::vector<float> gray_to_raw(std::span<const std::uint8_t> gray, double intensity_max);

// Path builders.
std::vector<PlanarPosition> straight_path(PlanarPosition start, double heading_rad,
                                          double spacing, std::size_t count);
/// Back-and-forth east-west lanes stacked northward, joined by short turns.
std::vector<PlanarPosition> lawnmower_path(PlanarPosition start, double lane_length,
                                           double lane_spacing, std::size_t lanes, double spacing);
/// Adds isotropic Gaussian noise of `sigma` meters to every point.
std::vector<PlanarPosition> jitter_path(std::span<const PlanarPosition> path, double sigma,
                                        std::uint64_t seed);
/// `line:X0,Y0,X1,Y1,N`, `lawnmower:LENGTH,SPACING,LANES,STEP` or
/// `points:X,Y;X,Y;...`.
std::vector<PlanarPosition> parse_path(std::string_view spec);

/// The frozen noisy benchmark used to check outlier-removal rates.
struct BenchmarkSpec {
  DepthField field;
  std::vector<PlanarPosition> path;
  SynthOptions options;
};
BenchmarkSpec noisy_benchmark();

}  // namespace bathy
